#include "apl/function_file.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "apl/errors.hpp"

namespace apl {

namespace {

[[noreturn]] void bad(const std::string& path, const std::string& msg) {
  throw ValidationError(path.empty() ? msg : path + ": " + msg);
}

NormKind norm_from_json(const Json& j, const std::string& path) {
  if (!j.is_string()) bad(path, "expected \"euclidean\" or \"max\"");
  const auto s = j.get<std::string>();
  if (s == "euclidean") return NormKind::Euclidean;
  if (s == "max") return NormKind::Max;
  bad(path, "unknown norm \"" + s + "\"");
}

std::size_t dim_from_json(const Json& obj) {
  const Json& d = field(obj, "dim", "");
  if (!d.is_number_integer() || d.get<long long>() < 1) bad("dim", "expected a positive integer");
  return static_cast<std::size_t>(d.get<long long>());
}

void require_dim(const ComplexVec& v, std::size_t dim, const std::string& path) {
  if (v.dim() != dim) {
    std::ostringstream os;
    os << "expected " << dim << " complex components, got " << v.dim();
    bad(path, os.str());
  }
}

TrigPolynomial trig_from_json(const Json& obj) {
  const std::size_t dim = dim_from_json(obj);
  const NormKind kind = norm_from_json(field(obj, "norm", ""), "norm");
  const Json& terms = field(obj, "terms", "");
  if (!terms.is_array()) bad("terms", "expected an array");
  std::vector<TrigTerm> out;
  for (std::size_t k = 0; k < terms.size(); ++k) {
    const std::string path = "terms[" + std::to_string(k) + "]";
    if (!terms[k].is_object()) bad(path, "expected an object");
    TrigTerm term;
    term.freq = number_from_json(field(terms[k], "freq", path), path + ".freq");
    term.coeff = vec_from_json(field(terms[k], "coeff", path), path + ".coeff");
    require_dim(term.coeff, dim, path + ".coeff");
    out.push_back(std::move(term));
  }
  return TrigPolynomial::canonicalize(dim, kind, std::move(out));
}

SampledFile sampled_from_json(const Json& obj) {
  const std::size_t dim = dim_from_json(obj);
  NormKind kind = NormKind::Euclidean;
  if (obj.contains("norm")) kind = norm_from_json(obj["norm"], "norm");
  const double t0 = number_from_json(field(obj, "t0", ""), "t0");
  const double dt = number_from_json(field(obj, "dt", ""), "dt");
  if (!(dt > 0.0)) bad("dt", "must be > 0");
  const Json& values = field(obj, "values", "");
  if (!values.is_array() || values.empty()) bad("values", "expected a nonempty array");
  std::vector<ComplexVec> vs;
  vs.reserve(values.size());
  for (std::size_t k = 0; k < values.size(); ++k) {
    const std::string path = "values[" + std::to_string(k) + "]";
    vs.push_back(vec_from_json(values[k], path));
    require_dim(vs.back(), dim, path);
  }
  std::optional<double> lip;
  const Json& l = field(obj, "lipschitz", "");
  if (!l.is_null()) {
    lip = number_from_json(l, "lipschitz");
    if (*lip < 0.0) bad("lipschitz", "must be >= 0 or null");
  }
  SampledFile file{SampledFunction(t0, dt, std::move(vs), lip), kind};
  if (lip && file.function.observed_slope(kind) > *lip * (1.0 + 1e-12))
    bad("lipschitz", "bound is violated by consecutive samples");
  return file;
}

}  // namespace

Json parse_json_text(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    // e.byte is 1-based; translate to a line number for the diagnostic
    std::size_t line = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i)
      if (text[i] == '\n') ++line;
    std::ostringstream os;
    os << "line " << line << ": malformed JSON (" << e.what() << ")";
    throw ValidationError(os.str());
  }
}

const Json& field(const Json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) bad(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) bad(path.empty() ? std::string(key) : path + "." + key, "missing field");
  return *it;
}

double number_from_json(const Json& j, const std::string& path) {
  if (!j.is_number()) bad(path, "expected a number");
  const double x = j.get<double>();
  if (!std::isfinite(x)) bad(path, "expected a finite number");
  return x;
}

Complex complex_from_json(const Json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) bad(path, "expected [re, im]");
  return {number_from_json(j[0], path + "[0]"), number_from_json(j[1], path + "[1]")};
}

ComplexVec vec_from_json(const Json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) bad(path, "expected a nonempty array of [re, im] pairs");
  ComplexVec v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i)
    v[i] = complex_from_json(j[i], path + "[" + std::to_string(i) + "]");
  return v;
}

Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Json vec_to_json(const ComplexVec& v) {
  Json a = Json::array();
  for (auto z : v) a.push_back(complex_to_json(z));
  return a;
}

FunctionFile parse_function(std::string_view text) {
  const Json obj = parse_json_text(text);
  if (!obj.is_object()) bad("", "top level must be an object");
  const Json& type = field(obj, "type", "");
  if (!type.is_string()) bad("type", "expected a string");
  const auto t = type.get<std::string>();
  if (t == "trig_poly") return trig_from_json(obj);
  if (t == "sampled") return sampled_from_json(obj);
  bad("type", "unknown function type \"" + t + "\"");
}

FunctionFile load_function(const std::string& path) {
  try {
    return parse_function(read_file(path));
  } catch (const ValidationError& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

Json to_json(const TrigPolynomial& f) {
  Json terms = Json::array();
  for (const auto& term : f.terms()) {
    Json t;
    t["freq"] = term.freq;
    t["coeff"] = vec_to_json(term.coeff);
    terms.push_back(std::move(t));
  }
  Json j;
  j["type"] = "trig_poly";
  j["dim"] = f.dim();
  j["norm"] = to_string(f.norm_kind());
  j["terms"] = std::move(terms);
  return j;
}

Json to_json(const SampledFile& f) {
  Json values = Json::array();
  for (const auto& v : f.function.values()) values.push_back(vec_to_json(v));
  Json j;
  j["type"] = "sampled";
  j["dim"] = f.function.dim();
  j["norm"] = to_string(f.norm_kind);
  j["t0"] = f.function.t0();
  j["dt"] = f.function.dt();
  j["values"] = std::move(values);
  j["lipschitz"] = f.function.lipschitz() ? Json(*f.function.lipschitz()) : Json(nullptr);
  return j;
}

std::string serialize(const TrigPolynomial& f) { return to_json(f).dump(2) + "\n"; }
std::string serialize(const SampledFile& f) { return to_json(f).dump(2) + "\n"; }

Signal to_signal(const FunctionFile& f) {
  if (const auto* trig = std::get_if<TrigPolynomial>(&f)) return Signal(*trig);
  const auto& s = std::get<SampledFile>(f);
  return Signal(s.function, s.norm_kind);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ValidationError("cannot write " + path);
  out << contents;
  if (!out) throw ValidationError("write failed for " + path);
}

}  // namespace apl

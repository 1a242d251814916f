#include "apl/reports.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "apl/errors.hpp"
#include "apl/function_file.hpp"

namespace apl {

namespace {

Json finite_or_null(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

}  // namespace

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json to_json(const ScanReport& r) {
  Json certs = Json::array();
  for (const auto& c : r.certificates) {
    Json e;
    e["tau"] = c.tau;
    e["status"] = to_string(c.status);
    e["lower"] = c.bracket.lower;
    e["upper"] = c.bracket.upper;
    e["witness_t"] = c.witness_t ? Json(*c.witness_t) : Json(nullptr);
    certs.push_back(std::move(e));
  }
  Json j;
  j["mode"] = to_string(r.mode);
  j["eps"] = r.eps;
  j["tau_step"] = r.tau_step;
  j["tau_max"] = r.tau_max;
  j["certificates"] = std::move(certs);
  j["certified_taus"] = r.certified_taus;
  j["max_gap"] = finite_or_null(r.max_gap);  // null encodes +infinity
  j["unknown_count"] = r.unknown_count;
  j["recurrence_caveat"] = r.recurrence_caveat;
  return j;
}

ScanReport scan_report_from_json(const Json& j) {
  ScanReport r;
  const Json& mode = field(j, "mode", "");
  if (!mode.is_string()) throw ValidationError("mode: expected a string");
  r.mode = defect_mode_from_string(mode.get<std::string>());
  r.eps = number_from_json(field(j, "eps", ""), "eps");
  r.tau_step = number_from_json(field(j, "tau_step", ""), "tau_step");
  r.tau_max = number_from_json(field(j, "tau_max", ""), "tau_max");
  const Json& taus = field(j, "certified_taus", "");
  if (!taus.is_array()) throw ValidationError("certified_taus: expected an array");
  for (std::size_t k = 0; k < taus.size(); ++k) {
    const double t = number_from_json(taus[k], "certified_taus[" + std::to_string(k) + "]");
    if (!r.certified_taus.empty() && t <= r.certified_taus.back())
      throw ValidationError("certified_taus: must be strictly increasing");
    r.certified_taus.push_back(t);
  }
  const Json& gap = field(j, "max_gap", "");
  r.max_gap = gap.is_null() ? std::numeric_limits<double>::infinity() : number_from_json(gap, "max_gap");
  const Json& unknown = field(j, "unknown_count", "");
  if (!unknown.is_number_unsigned()) throw ValidationError("unknown_count: expected a nonnegative integer");
  r.unknown_count = unknown.get<std::size_t>();
  if (j.contains("recurrence_caveat")) r.recurrence_caveat = j["recurrence_caveat"].get<bool>();
  return r;
}

std::string to_csv(const ScanReport& r) {
  std::ostringstream os;
  os.precision(17);
  os << "tau,lower,upper,status\n";
  for (const auto& c : r.certificates)
    os << c.tau << ',' << c.bracket.lower << ',' << c.bracket.upper << ',' << to_string(c.status) << '\n';
  return os.str();
}

Json to_json(const DensitySummary& s) {
  Json bins = Json::array();
  for (const auto& b : s.histogram) {
    Json e;
    e["lo"] = b.lo;
    e["hi"] = b.hi;
    e["count"] = b.count;
    bins.push_back(std::move(e));
  }
  Json j;
  j["l_estimate"] = finite_or_null(s.l_estimate);
  j["tau_max"] = s.tau_max;
  j["certified_count"] = s.certified_count;
  j["gap_histogram"] = std::move(bins);
  j["scope"] = "window-local evidence on (0, tau_max]; not a proof of relative density on the whole line";
  return j;
}

Json to_json(const SpectrumReport& s) {
  Json a = Json::array();
  for (const auto& e : s.entries) {
    Json j;
    j["freq"] = e.freq;
    j["coeff"] = vec_to_json(e.coeff);
    j["norm"] = e.norm;
    a.push_back(std::move(j));
  }
  return a;
}

Json to_json(const AnpVerdict& v) {
  Json j;
  j["is_member"] = v.is_member;
  j["distance"] = v.distance;
  j["mean"] = vec_to_json(v.mean);
  return j;
}

Json analyze_report(const SpectrumReport& s, const AnpVerdict& anp,
                    const std::vector<NumericCheck>& checks) {
  Json nc = Json::array();
  for (const auto& c : checks) {
    Json e;
    e["freq"] = c.freq;
    e["T"] = c.horizon;
    e["error_vs_exact"] = c.error_vs_exact;
    nc.push_back(std::move(e));
  }
  Json j;
  j["spectrum"] = to_json(s);
  j["anp"] = to_json(anp);
  j["numeric_checks"] = std::move(nc);
  return j;
}

Json stepanov_report(const StepanovParams& params, double tau, const DefectBracket& b) {
  Json j;
  j["p"] = params.p;
  j["tau"] = tau;
  j["lower"] = b.lower;
  j["upper"] = finite_or_null(b.upper);
  j["quad_points"] = params.s_quad_points;
  return j;
}

Json to_json(const DecompositionVerdict& v) {
  Json j;
  j["identity_ok"] = v.identity_ok;
  j["c0_ok"] = v.c0_ok;
  j["antiperiodic_ok"] = v.antiperiodic_ok;
  j["horizon"] = v.horizon;
  return j;
}

Json to_json(const TransferCheck& c) {
  Json j;
  j["tau"] = c.tau;
  j["eps"] = c.eps;
  j["measured_defect"] = c.measured_defect;
  j["bound"] = c.bound;
  j["margin"] = c.margin;
  j["ok"] = c.ok;
  return j;
}

Json convolution_report(const ConvolutionResult& r, double M, const std::vector<TransferCheck>& checks) {
  Json values = Json::array();
  for (const auto& v : r.values) values.push_back(vec_to_json(v));
  Json tc = Json::array();
  for (const auto& c : checks) tc.push_back(to_json(c));
  Json j;
  j["kind"] = to_string(r.kind);
  j["t_grid"] = r.t_grid;
  j["values"] = std::move(values);
  j["truncation_S"] = r.truncation_S;
  j["tail_error_bound"] = r.tail_error_bound;
  j["M"] = finite_or_null(M);
  j["transfer_checks"] = std::move(tc);
  return j;
}

}  // namespace apl

#pragma once

// Function and kernel files: structured JSON objects with complex numbers
// written as [re, im] pairs.

#include <string>
#include <string_view>
#include <variant>

#include "apl/json_fwd.hpp"
#include "apl/signals.hpp"

namespace apl {

struct SampledFile {
  SampledFunction function;
  NormKind norm_kind = NormKind::Euclidean;
};

using FunctionFile = std::variant<TrigPolynomial, SampledFile>;

/// Throws ValidationError naming the offending field path (e.g. "terms[2].coeff[0]").
FunctionFile parse_function(std::string_view text);
FunctionFile load_function(const std::string& path);

Json to_json(const TrigPolynomial& f);
Json to_json(const SampledFile& f);

/// Canonical serialization (two-space indent, trailing newline).
std::string serialize(const TrigPolynomial& f);
std::string serialize(const SampledFile& f);

Signal to_signal(const FunctionFile& f);

// helpers shared with other file formats
Json complex_to_json(Complex z);
Json vec_to_json(const ComplexVec& v);
Complex complex_from_json(const Json& j, const std::string& path);
ComplexVec vec_from_json(const Json& j, const std::string& path);
double number_from_json(const Json& j, const std::string& path);
const Json& field(const Json& obj, const char* key, const std::string& path);
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);
Json parse_json_text(std::string_view text);

}  // namespace apl

#pragma once

// JSON and CSV renderings of the analysis results.

#include <string>
#include <vector>

#include "apl/bohr.hpp"
#include "apl/convolution.hpp"
#include "apl/json_fwd.hpp"
#include "apl/scanner.hpp"
#include "apl/stepanov.hpp"

namespace apl {

Json to_json(const ScanReport& r);
/// Inverse of to_json(ScanReport) for the fields `density` needs.
ScanReport scan_report_from_json(const Json& j);
std::string to_csv(const ScanReport& r);

Json to_json(const DensitySummary& s);
Json to_json(const SpectrumReport& s);
Json to_json(const AnpVerdict& v);

struct NumericCheck {
  double freq = 0.0;
  double horizon = 0.0;
  double error_vs_exact = 0.0;
};

Json analyze_report(const SpectrumReport& s, const AnpVerdict& anp,
                    const std::vector<NumericCheck>& checks);

Json stepanov_report(const StepanovParams& params, double tau, const DefectBracket& b);
Json to_json(const DecompositionVerdict& v);
Json to_json(const TransferCheck& c);
Json convolution_report(const ConvolutionResult& r, double M, const std::vector<TransferCheck>& checks);

/// Two-space indented dump with a trailing newline.
std::string dump(const Json& j);

}  // namespace apl

#pragma once

// Bohr transform P_r(f) = lim (1/T) int_0^T exp(-i r s) f(s) ds, the spectrum,
// and membership in ANP = { almost periodic f : P_0(f) = 0 }.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "apl/signals.hpp"

namespace apl {

enum class BohrMethod { Exact, Numeric };

inline constexpr double kBohrShift = 17.3;
inline constexpr double kMembershipTol = 1e-10;

struct BohrCoefficient {
  double freq = 0.0;
  ComplexVec value;
  BohrMethod method = BohrMethod::Exact;
  double horizon = 0.0;  // averaging length T (Numeric only)
  // (1/T) int_alpha^{alpha+T} exp(-i r s) f(s) ds at alpha = kBohrShift (Numeric only)
  std::optional<ComplexVec> shifted_value;
};

BohrCoefficient bohr_exact(const TrigPolynomial& f, double r, double freq_tol = kDefaultFreqTol);

/// Composite Simpson average over [0, T] and over [kBohrShift, kBohrShift + T].
BohrCoefficient bohr_numeric(const Signal& f, double r, double horizon, double quad_step);

/// (2pi / lambda_max) / 20, where lambda_max bounds |lambda_j - r| over the terms.
double default_quad_step(const TrigPolynomial& f, double r);

struct SpectrumEntry {
  double freq = 0.0;
  ComplexVec coeff;
  double norm = 0.0;
};

struct SpectrumReport {
  std::vector<SpectrumEntry> entries;  // ascending frequency
};

SpectrumReport spectrum(const TrigPolynomial& f);

/// Rebuilds sum_r P_r(f) exp(i r t) from a spectrum report.
TrigPolynomial synthesize(const SpectrumReport& s, std::size_t dim, NormKind kind);

struct AnpVerdict {
  bool is_member = false;
  ComplexVec mean;  // P_0(f)
  double distance = 0.0;
  std::string note;
};

/// Closed-span membership: f is in ANP iff ||P_0(f)|| <= membership_tol.
/// Membership does not make f itself almost anti-periodic.
AnpVerdict anp_membership(const TrigPolynomial& f, double membership_tol = kMembershipTol);

struct AnpDistance {
  double distance = 0.0;
  TrigPolynomial anp_part;  // f - P_0(f)
  ComplexVec mean;          // P_0(f)
};

/// P_0 has norm one on AP and vanishes exactly on ANP, so the sup-norm distance
/// from f to ANP is ||P_0(f)||, attained by f - P_0(f).
AnpDistance anp_distance(const TrigPolynomial& f);

struct ApLambdaEvidence {
  double r = 0.0;
  bool in_lambda = false;
  bool modulated_member = false;  // exp(-i r .) f in ANP
  double mean_norm = 0.0;
};

struct ApLambdaResult {
  bool holds = false;
  std::vector<ApLambdaEvidence> evidence;
  std::string reduction;
};

/// f in AP_Lambda iff exp(-i r .) f in ANP for every r outside Lambda. Only
/// r in sigma(f) can fail, so only those are checked.
ApLambdaResult ap_lambda_test(const TrigPolynomial& f, const std::function<bool(double)>& in_lambda,
                              double freq_tol = kDefaultFreqTol,
                              double membership_tol = kMembershipTol);

/// (1/(b-a)) int_a^b f(s) ds by composite Simpson with step <= quad_step.
ComplexVec mean_over(const Signal& f, double a, double b, double quad_step);

}  // namespace apl

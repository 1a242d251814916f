#include "apl/bohr.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "apl/errors.hpp"
#include "apl/quadrature.hpp"

namespace apl {

BohrCoefficient bohr_exact(const TrigPolynomial& f, double r, double freq_tol) {
  BohrCoefficient out;
  out.freq = r;
  out.method = BohrMethod::Exact;
  out.value = ComplexVec(f.dim());
  for (const auto& term : f.terms()) {
    if (std::abs(term.freq - r) <= freq_tol) {
      out.value = term.coeff;
      break;
    }
  }
  return out;
}

double default_quad_step(const TrigPolynomial& f, double r) {
  double lambda_max = 0.0;
  for (const auto& term : f.terms()) lambda_max = std::max(lambda_max, std::abs(term.freq - r));
  if (lambda_max == 0.0) return 0.1;
  return std::min(0.1, 2.0 * std::numbers::pi / lambda_max / 20.0);
}

namespace {

ComplexVec modulated_average(const Signal& f, double r, double a, double horizon, double step) {
  const std::size_t n = quad::panel_count(a, a + horizon, step);
  ComplexVec integral = quad::simpson(
      [&](double s) { return std::polar(1.0, -r * s) * f(s); }, a, a + horizon, n, f.dim());
  return integral *= Complex(1.0 / horizon, 0.0);
}

}  // namespace

BohrCoefficient bohr_numeric(const Signal& f, double r, double horizon, double quad_step) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw ValidationError("horizon T must be > 0");
  if (!(quad_step > 0.0) || !std::isfinite(quad_step)) throw ValidationError("quad_step must be > 0");
  if (f.domain_lo() > 0.0 || f.domain_hi() < kBohrShift + horizon)
    throw ValidationError("signal domain does not cover the averaging windows");
  BohrCoefficient out;
  out.freq = r;
  out.method = BohrMethod::Numeric;
  out.horizon = horizon;
  out.value = modulated_average(f, r, 0.0, horizon, quad_step);
  out.shifted_value = modulated_average(f, r, kBohrShift, horizon, quad_step);
  return out;
}

SpectrumReport spectrum(const TrigPolynomial& f) {
  SpectrumReport s;
  for (const auto& term : f.terms())
    s.entries.push_back({term.freq, term.coeff, term.coeff.norm(f.norm_kind())});
  return s;
}

TrigPolynomial synthesize(const SpectrumReport& s, std::size_t dim, NormKind kind) {
  std::vector<TrigTerm> terms;
  for (const auto& e : s.entries) terms.push_back({e.freq, e.coeff});
  return TrigPolynomial::canonicalize(dim, kind, std::move(terms));
}

AnpVerdict anp_membership(const TrigPolynomial& f, double membership_tol) {
  if (!(membership_tol >= 0.0)) throw ValidationError("membership_tol must be >= 0");
  AnpVerdict v;
  v.mean = bohr_exact(f, 0.0).value;
  v.distance = v.mean.norm(f.norm_kind());
  v.is_member = v.distance <= membership_tol;
  v.note = "membership in the closed span ANP does not imply that f is almost anti-periodic";
  return v;
}

AnpDistance anp_distance(const TrigPolynomial& f) {
  const ComplexVec mean = bohr_exact(f, 0.0).value;
  return {mean.norm(f.norm_kind()), add(f, scale(constant(mean, f.norm_kind()), -1.0)), mean};
}

ApLambdaResult ap_lambda_test(const TrigPolynomial& f, const std::function<bool(double)>& in_lambda,
                              double freq_tol, double membership_tol) {
  ApLambdaResult result;
  result.holds = true;
  result.reduction =
      "only r in sigma(f) were checked: for r outside sigma(f) the modulated function has "
      "no zero frequency and is in ANP automatically";
  const TrigPolynomial merged = TrigPolynomial::canonicalize(
      f.dim(), f.norm_kind(), std::vector<TrigTerm>(f.terms().begin(), f.terms().end()), freq_tol);
  for (const auto& term : merged.terms()) {
    ApLambdaEvidence e;
    e.r = term.freq;
    e.in_lambda = in_lambda(term.freq);
    const AnpVerdict v = anp_membership(modulate(merged, term.freq), membership_tol);
    e.modulated_member = v.is_member;
    e.mean_norm = v.distance;
    if (!e.modulated_member && !e.in_lambda) result.holds = false;
    result.evidence.push_back(e);
  }
  return result;
}

ComplexVec mean_over(const Signal& f, double a, double b, double quad_step) {
  if (!(b > a)) throw ValidationError("mean_over needs b > a");
  const std::size_t n = quad::panel_count(a, b, quad_step);
  ComplexVec integral = quad::simpson([&](double s) { return f(s); }, a, b, n, f.dim());
  return integral *= Complex(1.0 / (b - a), 0.0);
}

}  // namespace apl

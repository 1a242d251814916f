#include "apl/stepanov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "apl/errors.hpp"

namespace apl {

namespace {

void check_params(const StepanovParams& params) {
  if (!(params.p >= 1.0) || !std::isfinite(params.p)) throw ValidationError("p must be in [1, inf)");
  if (params.s_quad_points < 3 || params.s_quad_points % 2 == 0)
    throw ValidationError("s_quad_points must be odd and >= 3");
}

// Simpson weights on [0, 1]; positive and summing to one, so the quadrature is
// a probability average and the discrete power means stay monotone in p.
std::vector<double> simpson_weights(int points) {
  const int n = points - 1;
  const double h = 1.0 / n;
  std::vector<double> w(points);
  for (int k = 0; k <= n; ++k) w[k] = (k == 0 || k == n ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0)) * h / 3.0;
  return w;
}

template <typename Pointwise>
double unit_window_norm(const StepanovParams& params, double t, Pointwise&& value) {
  const auto w = simpson_weights(params.s_quad_points);
  const int n = params.s_quad_points - 1;
  double acc = 0.0;
  for (int k = 0; k <= n; ++k) {
    const double s = (k == n) ? 1.0 : static_cast<double>(k) / n;
    acc += w[k] * std::pow(value(t + s), params.p);
  }
  return std::pow(acc, 1.0 / params.p);
}

std::size_t intervals(const GridParams& g) {
  if (!(g.t_step > 0.0) || !(g.t_window >= 0.0)) throw ValidationError("t-grid must be positive");
  return static_cast<std::size_t>(std::ceil(g.t_window / g.t_step - 1e-9));
}

DefectBracket lower_bracket(const Signal& f, const StepanovParams& params, double tau,
                            const GridParams& t_grid) {
  check_params(params);
  DefectBracket b;
  b.lower = -1.0;
  const std::size_t n = intervals(t_grid);
  for (std::size_t k = 0; k <= n; ++k) {
    const double t = t_grid.t_origin + t_grid.t_step * static_cast<double>(k);
    const double v = sp_window_defect(f, params, tau, t);
    if (v > b.lower) {
      b.lower = v;
      b.witness_t = t;
    }
  }
  return b;
}

}  // namespace

double sp_window_defect(const Signal& f, const StepanovParams& params, double tau, double t) {
  check_params(params);
  return unit_window_norm(params, t, [&](double s) { return (f(s + tau) + f(s)).norm(f.norm_kind()); });
}

double sp_window_norm(const Signal& q, const StepanovParams& params, double t) {
  check_params(params);
  return unit_window_norm(params, t, [&](double s) { return q(s).norm(q.norm_kind()); });
}

DefectBracket sp_defect(const TrigPolynomial& f, const StepanovParams& params, double tau,
                        const GridParams& t_grid) {
  DefectBracket b = lower_bracket(Signal(f), params, tau, t_grid);
  GridParams sup_grid = t_grid;
  sup_grid.t_window += 1.0;
  const DefectBracket sup = defect_bracket(f, DefectMode::Anti, tau, sup_grid);
  b.triangle = sup.triangle;
  b.grid_bound = sup.grid_bound;
  b.upper = sup.upper;
  b.recurrence_caveat = sup.recurrence_caveat;
  return b;
}

DefectBracket sp_defect(const Signal& f, const StepanovParams& params, double tau,
                        const GridParams& t_grid) {
  if (const TrigPolynomial* trig = f.trig()) return sp_defect(*trig, params, tau, t_grid);
  DefectBracket b = lower_bracket(f, params, tau, t_grid);
  b.triangle = std::numeric_limits<double>::infinity();
  b.grid_bound = std::numeric_limits<double>::infinity();
  if (f.lipschitz()) {
    // sup-norm grid bound over [origin, origin + window + 1]
    const double h = t_grid.t_step;
    const auto n = static_cast<std::size_t>(std::ceil((t_grid.t_window + 1.0) / h - 1e-9));
    double m = 0.0;
    for (std::size_t k = 0; k <= n; ++k) {
      const double t = t_grid.t_origin + h * static_cast<double>(k);
      m = std::max(m, (f(t + tau) + f(t)).norm(f.norm_kind()));
    }
    b.grid_bound = m + 2.0 * *f.lipschitz() * h;
    b.recurrence_caveat = true;
  }
  b.upper = b.grid_bound;
  return b;
}

C0Profile c0_check(const Signal& q, double tol, double horizon, const C0Options& opts) {
  if (!(tol >= 0.0)) throw ValidationError("tol must be >= 0");
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw ValidationError("horizon must be > 0");
  if (opts.grid_points < 2 || opts.checkpoints < 1) throw ValidationError("bad c0 grid options");
  const double reach = opts.variant == C0Variant::Stepanov ? 1.0 : 0.0;
  if (q.domain_lo() > 0.9 * horizon || q.domain_hi() < horizon + reach)
    throw ValidationError("corrector domain too short for the requested horizon");

  auto value = [&](double t) {
    return opts.variant == C0Variant::Stepanov ? sp_window_norm(q, opts.stepanov, t)
                                               : q(t).norm(q.norm_kind());
  };
  auto window_sup = [&](double c) {
    double m = 0.0;
    const double a = 0.9 * c;
    for (int k = 0; k <= opts.grid_points; ++k)
      m = std::max(m, value(a + (c - a) * static_cast<double>(k) / opts.grid_points));
    return m;
  };

  C0Profile out;
  out.horizon = horizon;
  out.tol = tol;
  for (int k = opts.checkpoints - 1; k >= 0; --k) {
    const double c = horizon / std::ldexp(1.0, k);
    if (0.9 * c < q.domain_lo()) continue;
    out.profile.emplace_back(c, window_sup(c));
  }
  out.window_sup = out.profile.back().second;
  out.ok = out.window_sup <= tol;
  return out;
}

DecompositionVerdict verify_decomposition(const Signal& f, const AsymptoticDecomposition& d,
                                          const StepanovParams& params,
                                          const DecompositionCheck& check) {
  check_params(params);
  if (f.dim() != d.principal.dim() || f.dim() != d.corrector.dim())
    throw ValidationError("decomposition dimension mismatch");
  DecompositionVerdict v;
  v.horizon = check.horizon;

  // (c) f = g + q on the represented grid
  const auto n = static_cast<std::size_t>(std::ceil(check.horizon / check.grid_step - 1e-9));
  double residual = 0.0;
  for (std::size_t k = 0; k <= n; ++k) {
    const double t = std::min(check.horizon, check.grid_step * static_cast<double>(k));
    residual = std::max(residual, (f(t) - d.principal(t) - d.corrector(t)).norm(f.norm_kind()));
  }
  v.identity_residual = residual;
  v.identity_ok = residual <= check.identity_tol;

  // (b) q vanishes at infinity, up to the horizon
  C0Options c0;
  c0.variant = check.c0_variant;
  c0.stepanov = params;
  v.c0 = c0_check(d.corrector, check.c0_tol, check.horizon, c0);
  v.c0_ok = v.c0.ok;

  // (a) g has a certified eps-antiperiod in every window of the configured length
  ScanOptions so;
  so.mode = DefectMode::Anti;
  so.eps = check.eps;
  so.tau_max = check.tau_max;
  so.tau_step = check.tau_step;
  const ScanReport report = scan(d.principal, so);
  v.antiperiod_max_gap = report.max_gap;
  v.antiperiodic_ok = report.max_gap <= check.window_length;
  return v;
}

}  // namespace apl

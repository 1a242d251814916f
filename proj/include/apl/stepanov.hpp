#pragma once

// Stepanov S^p defects on unit windows and verification of asymptotic
// decompositions f = g + q (g almost anti-periodic, q vanishing at infinity).

#include <utility>
#include <vector>

#include "apl/scanner.hpp"
#include "apl/signals.hpp"

namespace apl {

struct StepanovParams {
  double p = 1.0;
  int s_quad_points = 65;  // odd; Simpson nodes on [0, 1]
};

/// (int_0^1 ||f(t+s+tau) + f(t+s)||^p ds)^(1/p) by Simpson in s.
double sp_window_defect(const Signal& f, const StepanovParams& params, double tau, double t);

/// (int_t^{t+1} ||q(s)||^p ds)^(1/p) by Simpson in s.
double sp_window_norm(const Signal& q, const StepanovParams& params, double t);

/// lower: max of sp_window_defect over the t-grid. upper: the sup-norm Anti
/// bracket's upper bound on the grid window extended by the unit S^p window,
/// which dominates every S^p seminorm.
DefectBracket sp_defect(const TrigPolynomial& f, const StepanovParams& params, double tau,
                        const GridParams& t_grid);

/// General signals: the upper bound needs a Lipschitz constant and is
/// +infinity without one.
DefectBracket sp_defect(const Signal& f, const StepanovParams& params, double tau,
                        const GridParams& t_grid);

enum class C0Variant { Uniform, Stepanov };

struct C0Options {
  C0Variant variant = C0Variant::Uniform;
  StepanovParams stepanov;
  int grid_points = 1000;  // per window [0.9 c, c]
  int checkpoints = 6;     // c = horizon / 2^k
};

struct C0Profile {
  bool ok = false;
  double horizon = 0.0;
  double tol = 0.0;
  double window_sup = 0.0;  // sup over [0.9 horizon, horizon]
  std::vector<std::pair<double, double>> profile;  // (checkpoint c, sup over [0.9 c, c]), ascending c
};

/// Finite-horizon check of q in C_0 (or, for the Stepanov variant, of the
/// unit-window lift of q).
C0Profile c0_check(const Signal& q, double tol, double horizon, const C0Options& opts = {});

struct AsymptoticDecomposition {
  TrigPolynomial principal;  // g
  Signal corrector;          // q
};

struct DecompositionCheck {
  double eps = 0.1;            // antiperiod tolerance for g
  double tau_max = 50.0;
  double tau_step = 0.01;
  double window_length = 10.0; // every window of this length must hold a certified antiperiod
  double horizon = 30.0;
  double grid_step = 0.01;     // identity check grid on [0, horizon]
  double identity_tol = 1e-10;
  double c0_tol = 1e-3;
  C0Variant c0_variant = C0Variant::Uniform;
};

struct DecompositionVerdict {
  bool identity_ok = false;
  bool c0_ok = false;
  bool antiperiodic_ok = false;
  double horizon = 0.0;
  double identity_residual = 0.0;
  double antiperiod_max_gap = 0.0;
  C0Profile c0;

  bool all_ok() const noexcept { return identity_ok && c0_ok && antiperiodic_ok; }
};

DecompositionVerdict verify_decomposition(const Signal& f, const AsymptoticDecomposition& d,
                                          const StepanovParams& params,
                                          const DecompositionCheck& check = {});

}  // namespace apl

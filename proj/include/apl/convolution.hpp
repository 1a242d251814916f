#pragma once

// Operator kernels R(t) = t^(gamma-1) exp(-b t) A, their unit-cell L^q
// summability constants, and the convolution products
//   G(t) = int_{-inf}^t R(t-s) g(s) ds = int_0^inf R(s) g(t-s) ds,
//   H(t) = int_0^t R(t-s) f(s) ds.

#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "apl/json_fwd.hpp"
#include "apl/scanner.hpp"
#include "apl/signals.hpp"
#include "apl/stepanov.hpp"

namespace apl {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

class Kernel {
 public:
  /// b > 0, gamma in (0, 1], matrix row-major dim x dim.
  Kernel(double b, double gamma, std::size_t dim, std::vector<Complex> matrix);

  double decay() const noexcept { return b_; }
  double gamma() const noexcept { return gamma_; }
  std::size_t dim() const noexcept { return dim_; }
  std::span<const Complex> matrix() const noexcept { return matrix_; }

  /// Scalar profile t^(gamma-1) exp(-b t), t > 0 (t = 0 allowed when gamma = 1).
  double profile(double t) const;
  ComplexVec apply(const ComplexVec& x) const;
  /// Spectral norm for Euclidean, max row sum for Max.
  double operator_norm(NormKind kind) const;
  Kernel scaled(Complex c) const;

  static Kernel identity(std::size_t dim, double b = 1.0, double gamma = 1.0);

 private:
  double b_;
  double gamma_;
  std::size_t dim_;
  std::vector<Complex> matrix_;
};

Kernel parse_kernel(std::string_view text);
Kernel load_kernel(const std::string& path);
Json to_json(const Kernel& k);

/// ||R||_{L^q[a, a+1]}; q = kInf gives the sup. Throws NumericError when the
/// cell touches 0 and q (gamma - 1) <= -1.
double lq_norm(const Kernel& kernel, double q, double a, NormKind kind);

struct SummabilityReport {
  double q = kInf;
  double shift = 0.0;
  std::vector<double> per_k_norms;  // ||R||_{L^q[s+k, s+k+1]}, k < truncation_K
  double M = 0.0;                   // sum of per_k_norms
  double tail_bound = 0.0;          // >= sum over k >= truncation_K
  int truncation_K = 0;
  double operator_norm = 0.0;
  NormKind norm_kind = NormKind::Euclidean;

  /// Rigorous upper bound on the full series.
  double upper() const noexcept { return M + tail_bound; }
};

/// Sums cells until the geometric envelope ||A|| exp(-b(s+K)) / (1 - exp(-b))
/// drops below tol.
SummabilityReport summability(const Kernel& kernel, double q, double tol, NormKind kind,
                              double shift = 0.0);

/// m_s = sum_k ||R||_{L^q[s+k, s+k+1]}.
double summability_shifted(const Kernel& kernel, double q, double s, NormKind kind,
                           double tol = 1e-13);

enum class ConvolutionKind { Infinite, Finite };

const char* to_string(ConvolutionKind kind) noexcept;

struct ConvolutionOptions {
  double quad_step = 0.01;
  double tail_tol = 1e-10;
  double s_cap = 1e4;  // largest admissible truncation S
  unsigned threads = 1;
};

struct ConvolutionResult {
  ConvolutionKind kind = ConvolutionKind::Infinite;
  std::vector<double> t_grid;
  std::vector<ComplexVec> values;
  double truncation_S = 0.0;
  double tail_error_bound = 0.0;   // ||A|| ||g||_inf int_S^inf profile
  double quad_error_bound = 0.0;   // max over the grid of |Simpson(h) - Simpson(2h)|
};

ConvolutionResult convolve_infinite(const Kernel& kernel, const TrigPolynomial& g,
                                    std::span<const double> t_grid,
                                    const ConvolutionOptions& opts = {});

/// f must be defined on [0, max t_grid].
ConvolutionResult convolve_finite(const Kernel& kernel, const Signal& f,
                                  std::span<const double> t_grid,
                                  const ConvolutionOptions& opts = {});

struct TransferOptions {
  std::vector<double> t_grid;  // default: 0, 0.25, ..., 20
  ConvolutionOptions conv;
  double summability_tol = 1e-12;
};

struct TransferCheck {
  double tau = 0.0;
  double eps = 0.0;
  double M = 0.0;                // rigorous upper bound on the series
  double measured_defect = 0.0;  // max ||G(t+tau) + G(t)|| on the grid
  double tolerance = 0.0;        // quadrature + truncation, per G value
  double bound = 0.0;            // M eps + 2 tolerance
  double margin = 0.0;           // bound - measured_defect
  bool ok = false;
};

/// An eps-antiperiod of g (sup sense, hence S^p for every p) is an
/// (M eps)-antiperiod of G.
TransferCheck transfer_check(const Kernel& kernel, const TrigPolynomial& g,
                                    const PeriodCertificate& cert, double q,
                                    const TransferOptions& opts = {});

struct AsymptoticCheckpoint {
  double t = 0.0;
  double condition_i = 0.0;   // int_t^{t+1} [int_{M_split}^s ||R(r)|| ||q(s-r)|| dr]^p ds
  double condition_ii = 0.0;  // int_t^{t+1} m_s^p ds
};

struct AsymptoticOptions {
  std::vector<double> checkpoints{5.0, 10.0, 20.0, 30.0};
  double tol_i = 1e-9;
  double tol_ii = 1e-10;
  double late_window_start = 20.0;
  double late_window_step = 0.1;
  double late_tol = 1e-4;
  int outer_points = 33;  // Simpson nodes on each unit window
  ConvolutionOptions conv;
};

struct AsymptoticVerdict {
  double p = 1.0;
  double q = kInf;
  double M_split = 0.0;
  double horizon = 0.0;
  std::vector<AsymptoticCheckpoint> checkpoints;
  bool condition_i_ok = false;
  bool condition_ii_ok = false;
  double late_window_diff = 0.0;  // max ||H_{g+q} - G_g|| on the late window
  bool late_window_ok = false;

  bool all_ok() const noexcept { return condition_i_ok && condition_ii_ok && late_window_ok; }
};

/// Requires a decomposition already accepted by verify_decomposition.
AsymptoticVerdict asymptotic_conditions_check(const Kernel& kernel, const AsymptoticDecomposition& d,
                                      const DecompositionVerdict& verified, double p,
                                      double M_split, double horizon,
                                      const AsymptoticOptions& opts = {});

double condition_i_window(const Kernel& kernel, const Signal& q, double p, double M_split,
                          double t, NormKind kind, int outer_points = 33, double step = 0.01);
double condition_ii_window(const Kernel& kernel, double p, double t, NormKind kind,
                           int outer_points = 33);

}  // namespace apl

#include "apl/convolution.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "apl/errors.hpp"
#include "apl/function_file.hpp"
#include "apl/parallel.hpp"
#include "apl/quadrature.hpp"

namespace apl {

Kernel::Kernel(double b, double gamma, std::size_t dim, std::vector<Complex> matrix)
    : b_(b), gamma_(gamma), dim_(dim), matrix_(std::move(matrix)) {
  if (!(b > 0.0) || !std::isfinite(b)) throw ValidationError("kernel decay b must be > 0");
  if (!(gamma > 0.0 && gamma <= 1.0)) throw ValidationError("kernel gamma must lie in (0, 1]");
  if (dim == 0 || matrix_.size() != dim * dim)
    throw ValidationError("kernel matrix must be square and nonempty");
  for (auto z : matrix_)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      throw ValidationError("kernel matrix entries must be finite");
}

double Kernel::profile(double t) const {
  if (gamma_ == 1.0) return std::exp(-b_ * t);
  return std::pow(t, gamma_ - 1.0) * std::exp(-b_ * t);
}

ComplexVec Kernel::apply(const ComplexVec& x) const {
  if (x.dim() != dim_) throw ValidationError("kernel/signal dimension mismatch");
  ComplexVec y(dim_);
  for (std::size_t i = 0; i < dim_; ++i) {
    Complex s = 0.0;
    for (std::size_t j = 0; j < dim_; ++j) s += matrix_[i * dim_ + j] * x[j];
    y[i] = s;
  }
  return y;
}

double Kernel::operator_norm(NormKind kind) const {
  if (kind == NormKind::Max) {
    double m = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) {
      double row = 0.0;
      for (std::size_t j = 0; j < dim_; ++j) row += std::abs(matrix_[i * dim_ + j]);
      m = std::max(m, row);
    }
    return m;
  }
  Eigen::MatrixXcd a(dim_, dim_);
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j)
      a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = matrix_[i * dim_ + j];
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a);
  return svd.singularValues()(0);
}

Kernel Kernel::scaled(Complex c) const {
  std::vector<Complex> m = matrix_;
  for (auto& z : m) z *= c;
  return Kernel(b_, gamma_, dim_, std::move(m));
}

Kernel Kernel::identity(std::size_t dim, double b, double gamma) {
  std::vector<Complex> m(dim * dim);
  for (std::size_t i = 0; i < dim; ++i) m[i * dim + i] = 1.0;
  return Kernel(b, gamma, dim, std::move(m));
}

Kernel parse_kernel(std::string_view text) {
  const Json obj = parse_json_text(text);
  const Json& type = field(obj, "type", "");
  if (!type.is_string() || type.get<std::string>() != "exp_matrix")
    throw ValidationError("type: expected \"exp_matrix\"");
  const double b = number_from_json(field(obj, "b", ""), "b");
  const double gamma = number_from_json(field(obj, "gamma", ""), "gamma");
  const Json& rows = field(obj, "matrix", "");
  if (!rows.is_array() || rows.empty()) throw ValidationError("matrix: expected a nonempty array of rows");
  const std::size_t dim = rows.size();
  std::vector<Complex> m;
  for (std::size_t i = 0; i < dim; ++i) {
    const std::string path = "matrix[" + std::to_string(i) + "]";
    const ComplexVec row = vec_from_json(rows[i], path);
    if (row.dim() != dim) throw ValidationError(path + ": row length differs from the row count");
    m.insert(m.end(), row.begin(), row.end());
  }
  return Kernel(b, gamma, dim, std::move(m));
}

Kernel load_kernel(const std::string& path) {
  try {
    return parse_kernel(read_file(path));
  } catch (const ValidationError& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

Json to_json(const Kernel& k) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < k.dim(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < k.dim(); ++j) row.push_back(complex_to_json(k.matrix()[i * k.dim() + j]));
    rows.push_back(std::move(row));
  }
  Json j;
  j["type"] = "exp_matrix";
  j["b"] = k.decay();
  j["gamma"] = k.gamma();
  j["matrix"] = std::move(rows);
  return j;
}

// ---------------------------------------------------------------------------

double lq_norm(const Kernel& kernel, double q, double a, NormKind kind) {
  if (!(q >= 1.0)) throw ValidationError("q must lie in [1, inf]");
  if (!(a >= 0.0) || !std::isfinite(a)) throw ValidationError("cell start must be >= 0");
  const double opnorm = kernel.operator_norm(kind);
  const double gamma = kernel.gamma();
  const double b = kernel.decay();
  const bool singular = gamma < 1.0 && a == 0.0;

  if (std::isinf(q)) {
    if (singular) throw NumericError("kernel is unbounded on [0, 1]: L^inf norm diverges (gamma < 1)");
    return opnorm * kernel.profile(a);  // profile is decreasing
  }
  if (singular) {
    const double alpha = q * (gamma - 1.0) + 1.0;
    if (alpha <= 0.0) {
      std::ostringstream os;
      os << "q (gamma - 1) = " << q * (gamma - 1.0) << " <= -1: kernel not L^" << q << " near 0";
      throw NumericError(os.str());
    }
    // t = u^(1/alpha) turns int_0^1 t^(alpha-1) exp(-b q t) dt into a smooth integral
    const double integral =
        quad::adaptive_simpson([&](double u) { return std::exp(-b * q * std::pow(u, 1.0 / alpha)); },
                               0.0, 1.0, 1e-14) /
        alpha;
    return opnorm * std::pow(integral, 1.0 / q);
  }
  const double scale = std::pow(kernel.profile(a + 0.5), q);
  const double integral = quad::adaptive_simpson(
      [&](double t) { return std::pow(kernel.profile(t), q); }, a, a + 1.0, 1e-13 * scale + 1e-300);
  return opnorm * std::pow(integral, 1.0 / q);
}

SummabilityReport summability(const Kernel& kernel, double q, double tol, NormKind kind,
                              double shift) {
  if (!(tol > 0.0)) throw ValidationError("summability tol must be > 0");
  if (!(shift >= 0.0) || !std::isfinite(shift)) throw ValidationError("shift must be >= 0");
  SummabilityReport r;
  r.q = q;
  r.shift = shift;
  r.norm_kind = kind;
  r.operator_norm = kernel.operator_norm(kind);
  const double b = kernel.decay();
  // for cells starting at c >= 1: ||R||_{L^q[c,c+1]} <= sup = ||A|| c^(gamma-1) e^(-b c) <= ||A|| e^(-b c)
  auto envelope = [&](int k) { return r.operator_norm * std::exp(-b * (shift + k)) / (1.0 - std::exp(-b)); };
  constexpr int kMaxCells = 1000000;
  int k = 0;
  while (shift + k < 1.0 || envelope(k) > tol) {
    if (k >= kMaxCells) throw NumericError("summability: tail bound does not reach the tolerance");
    r.per_k_norms.push_back(lq_norm(kernel, q, shift + k, kind));
    r.M += r.per_k_norms.back();
    ++k;
  }
  r.truncation_K = k;
  r.tail_bound = envelope(k);
  return r;
}

double summability_shifted(const Kernel& kernel, double q, double s, NormKind kind, double tol) {
  return summability(kernel, q, tol, kind, s).M;
}

const char* to_string(ConvolutionKind kind) noexcept {
  return kind == ConvolutionKind::Infinite ? "infinite" : "finite";
}

namespace {

struct KernelIntegral {
  ComplexVec value;
  double error = 0.0;
};

// int_0^upper profile(s) x(s) ds, with x(s) = signal(t - s). When gamma < 1
// the first unit cell uses u = s^gamma, under which profile(s) ds becomes
// (1/gamma) exp(-b u^(1/gamma)) du.
template <typename X>
KernelIntegral integrate_against_profile(const Kernel& kernel, X&& x, double upper, double h,
                                         std::size_t dim) {
  KernelIntegral out{ComplexVec(dim), 0.0};
  if (upper <= 0.0) return out;
  const double b = kernel.decay();
  const double gamma = kernel.gamma();
  auto accumulate = [&](const quad::SimpsonPair<ComplexVec>& p) {
    out.value += p.fine;
    out.error += (p.fine - p.coarse).norm(NormKind::Euclidean);
  };
  double smooth_from = 0.0;
  if (gamma < 1.0) {
    const double cell = std::min(1.0, upper);
    const double u_hi = std::pow(cell, gamma);
    const std::size_t n = quad::panel_count(0.0, u_hi, h);
    accumulate(quad::simpson_pair(
        [&](double u) {
          const double s = std::pow(u, 1.0 / gamma);
          return (std::exp(-b * s) / gamma) * x(s);
        },
        0.0, u_hi, n, ComplexVec(dim)));
    smooth_from = cell;
  }
  if (upper > smooth_from) {
    const std::size_t n = quad::panel_count(smooth_from, upper, h);
    accumulate(quad::simpson_pair([&](double s) { return kernel.profile(s) * x(s); }, smooth_from,
                                  upper, n, ComplexVec(dim)));
  }
  return out;
}

double tail_integral_bound(const Kernel& kernel, double S) {
  // int_S^inf s^(gamma-1) e^(-b s) ds <= e^(-b S) / b for S >= 1
  return std::exp(-kernel.decay() * S) / kernel.decay();
}

void check_conv_options(const ConvolutionOptions& opts) {
  if (!(opts.quad_step > 0.0) || !std::isfinite(opts.quad_step)) throw ValidationError("quad_step must be > 0");
  if (!(opts.tail_tol > 0.0)) throw ValidationError("tail_tol must be > 0");
}

}  // namespace

ConvolutionResult convolve_infinite(const Kernel& kernel, const TrigPolynomial& g,
                                    std::span<const double> t_grid, const ConvolutionOptions& opts) {
  check_conv_options(opts);
  if (kernel.dim() != g.dim()) throw ValidationError("kernel/signal dimension mismatch");
  ConvolutionResult r;
  r.kind = ConvolutionKind::Infinite;
  r.t_grid.assign(t_grid.begin(), t_grid.end());
  r.values.assign(t_grid.size(), ComplexVec(g.dim()));
  if (g.is_zero()) return r;

  const double opnorm = kernel.operator_norm(g.norm_kind());
  const double sup_g = g.coefficient_sum();
  const double b = kernel.decay();
  double S = std::max(1.0, std::log(std::max(opnorm * sup_g / (b * opts.tail_tol), 1.0)) / b);
  if (S > opts.s_cap) {
    std::ostringstream os;
    os << "tail tolerance " << opts.tail_tol << " needs truncation S = " << S << " > cap " << opts.s_cap;
    throw NumericError(os.str());
  }
  r.truncation_S = S;
  r.tail_error_bound = opnorm * sup_g * tail_integral_bound(kernel, S);

  std::vector<double> errors(t_grid.size(), 0.0);
  parallel_for(t_grid.size(), opts.threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) {
      const double t = t_grid[k];
      const KernelIntegral I = integrate_against_profile(
          kernel, [&](double s) { return g(t - s); }, S, opts.quad_step, g.dim());
      r.values[k] = kernel.apply(I.value);
      errors[k] = opnorm * I.error;
    }
  });
  for (double e : errors) r.quad_error_bound = std::max(r.quad_error_bound, e);
  return r;
}

ConvolutionResult convolve_finite(const Kernel& kernel, const Signal& f, std::span<const double> t_grid,
                                  const ConvolutionOptions& opts) {
  check_conv_options(opts);
  if (kernel.dim() != f.dim()) throw ValidationError("kernel/signal dimension mismatch");
  ConvolutionResult r;
  r.kind = ConvolutionKind::Finite;
  r.t_grid.assign(t_grid.begin(), t_grid.end());
  r.values.assign(t_grid.size(), ComplexVec(f.dim()));
  for (double t : t_grid) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw ValidationError("finite convolution needs t >= 0");
    if (t > f.domain_hi() || f.domain_lo() > 0.0)
      throw ValidationError("signal domain does not cover [0, t]");
  }
  const double opnorm = kernel.operator_norm(f.norm_kind());
  std::vector<double> errors(t_grid.size(), 0.0);
  parallel_for(t_grid.size(), opts.threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) {
      const double t = t_grid[k];
      const KernelIntegral I = integrate_against_profile(
          kernel, [&](double s) { return f(std::max(0.0, t - s)); }, t, opts.quad_step, f.dim());
      r.values[k] = kernel.apply(I.value);
      errors[k] = opnorm * I.error;
    }
  });
  r.truncation_S = t_grid.empty() ? 0.0 : *std::max_element(t_grid.begin(), t_grid.end());
  for (double e : errors) r.quad_error_bound = std::max(r.quad_error_bound, e);
  return r;
}

// ---------------------------------------------------------------------------

TransferCheck transfer_check(const Kernel& kernel, const TrigPolynomial& g,
                                    const PeriodCertificate& cert, double q,
                                    const TransferOptions& opts) {
  if (cert.mode != DefectMode::Anti || cert.status != CertStatus::Certified)
    throw ValidationError("transfer check needs a Certified anti-period certificate");
  std::vector<double> base = opts.t_grid;
  if (base.empty())
    for (int k = 0; k <= 80; ++k) base.push_back(0.25 * k);
  std::vector<double> grid = base;
  for (double t : base) grid.push_back(t + cert.tau);

  const SummabilityReport sr = summability(kernel, q, opts.summability_tol, g.norm_kind());
  const ConvolutionResult G = convolve_infinite(kernel, g, grid, opts.conv);

  TransferCheck c;
  c.tau = cert.tau;
  c.eps = cert.eps;
  c.M = sr.upper();
  const std::size_t n = base.size();
  for (std::size_t k = 0; k < n; ++k)
    c.measured_defect = std::max(c.measured_defect, (G.values[n + k] + G.values[k]).norm(g.norm_kind()));
  c.tolerance = G.quad_error_bound + G.tail_error_bound;
  c.bound = c.M * c.eps + 2.0 * c.tolerance;
  c.margin = c.bound - c.measured_defect;
  c.ok = c.measured_defect <= c.bound;
  return c;
}

double condition_i_window(const Kernel& kernel, const Signal& q, double p, double M_split, double t,
                          NormKind kind, int outer_points, double step) {
  const double opnorm = kernel.operator_norm(kind);
  auto inner = [&](double s) {
    if (s <= M_split) return 0.0;
    const std::size_t n = quad::panel_count(M_split, s, step);
    return quad::simpson(
        [&](double r) { return opnorm * kernel.profile(r) * q(s - r).norm(kind); }, M_split, s, n);
  };
  return quad::simpson([&](double s) { return std::pow(inner(s), p); }, t, t + 1.0,
                       static_cast<std::size_t>(outer_points - 1));
}

double condition_ii_window(const Kernel& kernel, double p, double t, NormKind kind, int outer_points) {
  const double q = p > 1.0 ? p / (p - 1.0) : kInf;
  return quad::simpson(
      [&](double s) { return std::pow(summability_shifted(kernel, q, s, kind), p); }, t, t + 1.0,
      static_cast<std::size_t>(outer_points - 1));
}

AsymptoticVerdict asymptotic_conditions_check(const Kernel& kernel, const AsymptoticDecomposition& d,
                                      const DecompositionVerdict& verified, double p,
                                      double M_split, double horizon, const AsymptoticOptions& opts) {
  if (!verified.all_ok()) throw ValidationError("decomposition has not been verified");
  if (!(p >= 1.0) || !std::isfinite(p)) throw ValidationError("p must be in [1, inf)");
  if (!(M_split > 0.0)) throw ValidationError("M_split must be > 0");
  if (opts.outer_points < 3 || opts.outer_points % 2 == 0)
    throw ValidationError("outer_points must be odd and >= 3");
  const NormKind kind = d.principal.norm_kind();

  AsymptoticVerdict v;
  v.p = p;
  v.q = p > 1.0 ? p / (p - 1.0) : kInf;
  v.M_split = M_split;
  v.horizon = horizon;
  for (double t : opts.checkpoints) {
    if (t > horizon) continue;
    v.checkpoints.push_back({t,
                             condition_i_window(kernel, d.corrector, p, M_split, t, kind,
                                                opts.outer_points, opts.conv.quad_step),
                             condition_ii_window(kernel, p, t, kind, opts.outer_points)});
  }
  if (v.checkpoints.empty()) throw ValidationError("no checkpoint lies within the horizon");
  auto decays = [&](auto member, double tol) {
    for (std::size_t i = 1; i < v.checkpoints.size(); ++i)
      if (v.checkpoints[i].*member > v.checkpoints[i - 1].*member) return false;
    return v.checkpoints.back().*member <= tol;
  };
  v.condition_i_ok = decays(&AsymptoticCheckpoint::condition_i, opts.tol_i);
  v.condition_ii_ok = decays(&AsymptoticCheckpoint::condition_ii, opts.tol_ii);

  std::vector<double> late;
  if (!(opts.late_window_step > 0.0)) throw ValidationError("late_window_step must be > 0");
  const auto late_n = static_cast<int>(std::lround(1.0 / opts.late_window_step));
  for (int k = 0; k <= late_n; ++k)
    late.push_back(opts.late_window_start + static_cast<double>(k) / late_n);
  const Signal f = Signal(d.principal) + d.corrector;
  const ConvolutionResult H = convolve_finite(kernel, f, late, opts.conv);
  const ConvolutionResult G = convolve_infinite(kernel, d.principal, late, opts.conv);
  for (std::size_t k = 0; k < late.size(); ++k)
    v.late_window_diff = std::max(v.late_window_diff, (H.values[k] - G.values[k]).norm(kind));
  v.late_window_ok = v.late_window_diff <= opts.late_tol;
  return v;
}

}  // namespace apl

#include "apl/scanner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "apl/errors.hpp"
#include "apl/parallel.hpp"

namespace apl {

const char* to_string(DefectMode mode) noexcept { return mode == DefectMode::Anti ? "anti" : "plain"; }

DefectMode defect_mode_from_string(const std::string& s) {
  if (s == "anti") return DefectMode::Anti;
  if (s == "plain") return DefectMode::Plain;
  throw ValidationError("mode must be \"anti\" or \"plain\", got \"" + s + "\"");
}

const char* to_string(CertStatus status) noexcept {
  switch (status) {
    case CertStatus::Certified: return "certified";
    case CertStatus::Refuted: return "refuted";
    case CertStatus::Unknown: return "unknown";
  }
  return "unknown";
}

CertStatus cert_status_from_string(const std::string& s) {
  if (s == "certified") return CertStatus::Certified;
  if (s == "refuted") return CertStatus::Refuted;
  if (s == "unknown") return CertStatus::Unknown;
  throw ValidationError("unknown certificate status \"" + s + "\"");
}

namespace {

constexpr double kMaxGridPoints = 2e8;
constexpr std::size_t kResyncEvery = 256;

void check_grid(const GridParams& g) {
  if (!(g.t_step > 0.0) || !std::isfinite(g.t_step)) throw ValidationError("t_step must be > 0");
  if (!(g.t_window >= g.t_step) || !std::isfinite(g.t_window))
    throw ValidationError("t_window must be >= t_step");
  if (!std::isfinite(g.t_origin)) throw ValidationError("t_origin must be finite");
  if (g.t_window / g.t_step > kMaxGridPoints) {
    std::ostringstream os;
    os << "t-grid of " << g.t_window / g.t_step << " points exceeds the cap of " << kMaxGridPoints;
    throw NumericError(os.str());
  }
}

Complex mode_sign(DefectMode mode) { return mode == DefectMode::Anti ? 1.0 : -1.0; }

// D(t) = f(t + tau) +/- f(t) = sum_j c_j (exp(i lambda_j tau) +/- 1) exp(i lambda_j t),
// itself a trigonometric polynomial in t with the same frequencies.
class DefectPolynomial {
 public:
  DefectPolynomial(const TrigPolynomial& f, DefectMode mode, double tau)
      : dim_(f.dim()), kind_(f.norm_kind()) {
    const Complex sign = mode_sign(mode);
    for (const auto& term : f.terms()) {
      const Complex factor = std::polar(1.0, term.freq * tau) + sign;
      freq_.push_back(term.freq);
      for (std::size_t i = 0; i < dim_; ++i) coeff_.push_back(term.coeff[i] * factor);
    }
  }

  double at(double t) const {
    std::vector<Complex> z(freq_.size());
    for (std::size_t j = 0; j < freq_.size(); ++j) z[j] = std::polar(1.0, freq_[j] * t);
    return norm_of(z);
  }

  // Visits t_k = origin + k h for k = 0..n; visit(t, value) returns true to stop.
  // Phases advance by rotation and are resynchronized from exact values
  // every kResyncEvery steps.
  template <typename Visit>
  void sweep(double origin, double h, std::size_t n, Visit&& visit) const {
    const std::size_t m = freq_.size();
    std::vector<Complex> z(m);
    std::vector<Complex> w(m);
    for (std::size_t j = 0; j < m; ++j) w[j] = std::polar(1.0, freq_[j] * h);
    for (std::size_t k = 0; k <= n; ++k) {
      const double t = origin + h * static_cast<double>(k);
      if (k % kResyncEvery == 0) {
        for (std::size_t j = 0; j < m; ++j) z[j] = std::polar(1.0, freq_[j] * t);
      }
      if (visit(t, norm_of(z))) return;
      for (std::size_t j = 0; j < m; ++j) z[j] *= w[j];
    }
  }

 private:
  double norm_of(const std::vector<Complex>& z) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) {
      Complex s = 0.0;
      for (std::size_t j = 0; j < z.size(); ++j) s += coeff_[j * dim_ + i] * z[j];
      if (kind_ == NormKind::Max) {
        acc = std::max(acc, std::abs(s));
      } else {
        acc += std::norm(s);
      }
    }
    return kind_ == NormKind::Max ? acc : std::sqrt(acc);
  }

  std::size_t dim_;
  NormKind kind_;
  std::vector<double> freq_;
  std::vector<Complex> coeff_;
};

std::size_t grid_intervals(const GridParams& g) {
  return static_cast<std::size_t>(std::ceil(g.t_window / g.t_step - 1e-9));
}

struct GridMax {
  double value = 0.0;
  double t = 0.0;
};

GridMax grid_max(const DefectPolynomial& d, const GridParams& g) {
  GridMax best{-1.0, g.t_origin};
  d.sweep(g.t_origin, g.t_step, grid_intervals(g), [&](double t, double v) {
    if (v > best.value) best = {v, t};
    return false;
  });
  // report the exactly evaluated value at the witness
  best.value = d.at(best.t);
  return best;
}

}  // namespace

double triangle_bound(const TrigPolynomial& f, DefectMode mode, double tau) {
  const Complex sign = mode_sign(mode);
  double s = 0.0;
  for (const auto& term : f.terms())
    s += term.coeff.norm(f.norm_kind()) * std::abs(std::polar(1.0, term.freq * tau) + sign);
  return s;
}

double defect_at(const TrigPolynomial& f, DefectMode mode, double tau, double t) {
  const ComplexVec a = f(t + tau);
  const ComplexVec b = f(t);
  return (mode == DefectMode::Anti ? a + b : a - b).norm(f.norm_kind());
}

GridParams default_grid(const TrigPolynomial& f, double eps) {
  if (!(eps > 0.0)) throw ValidationError("eps must be > 0");
  double lambda_min = std::numeric_limits<double>::infinity();
  for (const auto& term : f.terms())
    if (term.freq != 0.0) lambda_min = std::min(lambda_min, std::abs(term.freq));
  if (!std::isfinite(lambda_min)) return {1.0, 1.0, 0.0};
  GridParams g;
  g.t_window = 200.0 * 2.0 * std::numbers::pi / lambda_min;
  const double big_lambda = 2.0 * lipschitz_bound(f);
  g.t_step = std::min(g.t_window, eps / (10.0 * big_lambda));
  return g;
}

DefectBracket defect_bracket(const TrigPolynomial& f, DefectMode mode, double tau,
                             const GridParams& grid) {
  check_grid(grid);
  if (!std::isfinite(tau)) throw ValidationError("tau must be finite");
  const DefectPolynomial d(f, mode, tau);
  const GridMax m = grid_max(d, grid);
  DefectBracket b;
  b.lower = m.value;
  b.witness_t = m.t;
  b.triangle = triangle_bound(f, mode, tau);
  b.grid_bound = b.lower + 2.0 * lipschitz_bound(f) * grid.t_step;
  b.upper = std::min(b.triangle, b.grid_bound);
  b.recurrence_caveat = b.grid_bound < b.triangle;
  // the grid maximum can exceed the triangle bound only through round-off
  b.lower = std::min(b.lower, b.upper);
  return b;
}

PeriodCertificate classify(const TrigPolynomial& f, DefectMode mode, double tau, double eps,
                           const GridParams& grid) {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw ValidationError("eps must be > 0");
  check_grid(grid);
  if (!std::isfinite(tau)) throw ValidationError("tau must be finite");

  PeriodCertificate cert;
  cert.tau = tau;
  cert.eps = eps;
  cert.mode = mode;
  const DefectPolynomial d(f, mode, tau);
  DefectBracket& b = cert.bracket;
  b.triangle = triangle_bound(f, mode, tau);
  b.witness_t = grid.t_origin;
  b.lower = std::min(d.at(grid.t_origin), b.triangle);
  b.grid_bound = std::numeric_limits<double>::infinity();
  b.upper = b.triangle;

  if (b.triangle <= eps) {
    cert.status = CertStatus::Certified;
    return cert;
  }

  const double big_lambda = 2.0 * lipschitz_bound(f);
  GridParams g = grid;
  for (int round = 0; round < 2; ++round) {
    if (round == 1) {
      g.t_step *= 0.5;
      check_grid(g);
    }
    GridMax best{-1.0, g.t_origin};
    bool refuted = false;
    d.sweep(g.t_origin, g.t_step, grid_intervals(g), [&](double t, double v) {
      if (v > eps) {
        // confirm with direct evaluation; rotation drift is ~1e-14
        const double exact = d.at(t);
        if (exact > eps) {
          best = {exact, t};
          refuted = true;
          return true;
        }
      }
      if (v > best.value) best = {v, t};
      return false;
    });
    if (refuted) {
      b.lower = std::min(best.value, b.triangle);
      b.witness_t = best.t;
      cert.witness_t = best.t;
      cert.status = CertStatus::Refuted;
      return cert;
    }
    const double exact = std::min(d.at(best.t), b.triangle);
    if (exact > b.lower) {
      b.lower = exact;
      b.witness_t = best.t;
    }
    b.grid_bound = std::min(b.grid_bound, b.lower + big_lambda * g.t_step);
    b.upper = std::min(b.triangle, b.grid_bound);
    b.recurrence_caveat = b.grid_bound < b.triangle;
    if (b.upper <= eps) {
      cert.status = CertStatus::Certified;
      return cert;
    }
  }
  cert.status = CertStatus::Unknown;
  return cert;
}

PeriodCertificate classify(const TrigPolynomial& f, DefectMode mode, double tau, double eps) {
  // a global triangle certificate needs no grid, so tiny eps stays cheap
  if (eps > 0.0 && std::isfinite(tau) && triangle_bound(f, mode, tau) <= eps)
    return classify(f, mode, tau, eps, GridParams{1.0, 1.0, 0.0});
  return classify(f, mode, tau, eps, default_grid(f, eps));
}

std::vector<double> tau_grid(double tau_max, double tau_step) {
  if (!(tau_step > 0.0) || !std::isfinite(tau_step)) throw ValidationError("tau_step must be > 0");
  if (!(tau_max > 0.0) || !std::isfinite(tau_max)) throw ValidationError("tau_max must be > 0");
  const double ratio = tau_max / tau_step;
  if (ratio > 1e9) throw ValidationError("tau grid too large");
  const auto n = static_cast<std::size_t>(std::floor(ratio + 1e-9));
  std::vector<double> taus(n);
  for (std::size_t k = 0; k < n; ++k) taus[k] = static_cast<double>(k + 1) * tau_step;
  return taus;
}

double max_gap(std::span<const double> certified_taus, double tau_max) {
  if (certified_taus.empty()) return std::numeric_limits<double>::infinity();
  double gap = certified_taus.front();
  for (std::size_t i = 1; i < certified_taus.size(); ++i)
    gap = std::max(gap, certified_taus[i] - certified_taus[i - 1]);
  return std::max(gap, tau_max - certified_taus.back());
}

ScanReport scan(const TrigPolynomial& f, const ScanOptions& opts) {
  if (!(opts.eps > 0.0)) throw ValidationError("eps must be > 0");
  const std::vector<double> taus = tau_grid(opts.tau_max, opts.tau_step);
  const GridParams grid = opts.grid ? *opts.grid : default_grid(f, opts.eps);
  check_grid(grid);

  ScanReport report;
  report.mode = opts.mode;
  report.eps = opts.eps;
  report.tau_max = opts.tau_max;
  report.tau_step = opts.tau_step;
  report.certificates.resize(taus.size());
  parallel_for(taus.size(), opts.threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k)
      report.certificates[k] = classify(f, opts.mode, taus[k], opts.eps, grid);
  });
  for (const auto& c : report.certificates) {
    if (c.status == CertStatus::Certified) {
      report.certified_taus.push_back(c.tau);
      report.recurrence_caveat = report.recurrence_caveat || c.bracket.recurrence_caveat;
    } else if (c.status == CertStatus::Unknown) {
      ++report.unknown_count;
    }
  }
  report.max_gap = max_gap(report.certified_taus, report.tau_max);
  return report;
}

DensitySummary density_summary(std::span<const double> certified_taus, double tau_max,
                               std::size_t bins) {
  DensitySummary s;
  s.tau_max = tau_max;
  s.certified_count = certified_taus.size();
  s.l_estimate = max_gap(certified_taus, tau_max);
  if (certified_taus.size() < 2 || bins == 0) return s;
  std::vector<double> gaps;
  for (std::size_t i = 1; i < certified_taus.size(); ++i)
    gaps.push_back(certified_taus[i] - certified_taus[i - 1]);
  const double hi = *std::max_element(gaps.begin(), gaps.end());
  const double width = hi / static_cast<double>(bins);
  for (std::size_t b = 0; b < bins; ++b)
    s.histogram.push_back({width * static_cast<double>(b), width * static_cast<double>(b + 1), 0});
  for (double g : gaps) {
    auto idx = width > 0.0 ? static_cast<std::size_t>(g / width) : 0;
    s.histogram[std::min(idx, bins - 1)].count++;
  }
  return s;
}

DensitySummary density_summary(const ScanReport& report, std::size_t bins) {
  return density_summary(report.certified_taus, report.tau_max, bins);
}

PeriodCertificate doubling_check(const TrigPolynomial& f, const PeriodCertificate& cert,
                                 const GridParams& grid) {
  if (cert.mode != DefectMode::Anti || cert.status != CertStatus::Certified)
    throw ValidationError("doubling_check needs a Certified anti-period certificate");
  return classify(f, DefectMode::Plain, 2.0 * cert.tau, 2.0 * cert.eps, grid);
}

PeriodCertificate doubling_check(const TrigPolynomial& f, const PeriodCertificate& cert) {
  if (cert.mode != DefectMode::Anti || cert.status != CertStatus::Certified)
    throw ValidationError("doubling_check needs a Certified anti-period certificate");
  return classify(f, DefectMode::Plain, 2.0 * cert.tau, 2.0 * cert.eps);
}

}  // namespace apl

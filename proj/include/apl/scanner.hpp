#pragma once

// Certified brackets on sup_t ||f(t+tau) +/- f(t)||, classification of
// candidate (anti-)periods, and grid scans of the epsilon-(anti)period sets.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "apl/signals.hpp"

namespace apl {

/// Anti measures sup ||f(t+tau) + f(t)||; Plain measures sup ||f(t+tau) - f(t)||.
enum class DefectMode { Anti, Plain };

const char* to_string(DefectMode mode) noexcept;
DefectMode defect_mode_from_string(const std::string& s);

/// Evaluation grid t_origin + k * t_step covering [t_origin, t_origin + t_window].
struct GridParams {
  double t_window = 0.0;
  double t_step = 0.0;
  double t_origin = 0.0;
};

/// t_window = 200 * 2pi / (smallest nonzero |lambda|); t_step so that
/// 2 * lipschitz_bound(f) * t_step <= eps / 10.
GridParams default_grid(const TrigPolynomial& f, double eps);

struct DefectBracket {
  double lower = 0.0;      // attained at witness_t
  double upper = 0.0;      // min(triangle, grid_bound)
  double witness_t = 0.0;
  double triangle = 0.0;   // sum_j ||c_j|| |exp(i lambda_j tau) +/- 1|, global
  double grid_bound = 0.0; // lower + 2 Lambda_f t_step, proven on the window only
  bool recurrence_caveat = false;  // upper rests on grid_bound alone
};

/// Global triangle bound only; no grid work.
double triangle_bound(const TrigPolynomial& f, DefectMode mode, double tau);

/// ||f(t+tau) +/- f(t)|| by direct evaluation.
double defect_at(const TrigPolynomial& f, DefectMode mode, double tau, double t);

DefectBracket defect_bracket(const TrigPolynomial& f, DefectMode mode, double tau,
                             const GridParams& grid);

enum class CertStatus { Certified, Refuted, Unknown };

const char* to_string(CertStatus status) noexcept;
CertStatus cert_status_from_string(const std::string& s);

struct PeriodCertificate {
  double tau = 0.0;
  double eps = 0.0;
  DefectMode mode = DefectMode::Anti;
  DefectBracket bracket;
  CertStatus status = CertStatus::Unknown;
  std::optional<double> witness_t;  // set when Refuted
};

/// Decides tau in theta(f, eps) (Plain) or theta_ap(f, eps) (Anti).
///
/// Order of work: the global triangle bound first (certifies outright), then a
/// sweep of the t-grid from t_origin that stops at the first point whose
/// defect exceeds eps (an unconditional refutation), then the grid bound
/// (certification with recurrence caveat). An undecided outcome retries once
/// with half the t-step before returning Unknown. The bracket carries what
/// was computed up to the decision, so on an early exit `lower` is the value
/// at the witness rather than the full grid maximum.
PeriodCertificate classify(const TrigPolynomial& f, DefectMode mode, double tau, double eps,
                           const GridParams& grid);
PeriodCertificate classify(const TrigPolynomial& f, DefectMode mode, double tau, double eps);

struct ScanOptions {
  DefectMode mode = DefectMode::Anti;
  double eps = 0.1;
  double tau_max = 10.0;
  double tau_step = 0.01;
  std::optional<GridParams> grid;  // default_grid(f, eps) when empty
  unsigned threads = 1;
};

struct ScanReport {
  DefectMode mode = DefectMode::Anti;
  double eps = 0.0;
  double tau_max = 0.0;
  double tau_step = 0.0;
  std::vector<PeriodCertificate> certificates;
  std::vector<double> certified_taus;
  double max_gap = 0.0;  // +infinity when certified_taus is empty
  std::size_t unknown_count = 0;
  bool recurrence_caveat = false;
};

/// Grid taus k * tau_step, k = 1..N, N = floor(tau_max / tau_step).
std::vector<double> tau_grid(double tau_max, double tau_step);

/// Classifies every grid tau in (0, tau_max]. The report does not depend on
/// the thread count.
ScanReport scan(const TrigPolynomial& f, const ScanOptions& opts);

/// Largest gap between consecutive taus, counting the edges 0 and tau_max.
double max_gap(std::span<const double> certified_taus, double tau_max);

struct GapBin {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t count = 0;
};

/// Window-local evidence for relative density: l_estimate = max_gap over the
/// scanned window. Says nothing about the rest of the real line.
struct DensitySummary {
  double l_estimate = 0.0;
  double tau_max = 0.0;
  std::size_t certified_count = 0;
  std::vector<GapBin> histogram;  // gaps between consecutive certified taus
};

DensitySummary density_summary(std::span<const double> certified_taus, double tau_max,
                               std::size_t bins = 10);
DensitySummary density_summary(const ScanReport& report, std::size_t bins = 10);

/// A Certified Anti certificate at (tau, eps) implies a Plain certificate at
/// (2 tau, 2 eps); this recomputes the latter.
PeriodCertificate doubling_check(const TrigPolynomial& f, const PeriodCertificate& cert);
PeriodCertificate doubling_check(const TrigPolynomial& f, const PeriodCertificate& cert,
                                 const GridParams& grid);

}  // namespace apl

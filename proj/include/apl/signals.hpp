#pragma once

// Vector-valued trigonometric polynomials f(t) = sum_j c_j exp(i lambda_j t)
// with c_j in C^d, plus a sampled fallback and a type-erased evaluable signal.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace apl {

using Complex = std::complex<double>;

enum class NormKind { Euclidean, Max };

const char* to_string(NormKind kind) noexcept;

/// A point of X = C^d.
class ComplexVec {
 public:
  ComplexVec() = default;
  explicit ComplexVec(std::size_t dim) : c_(dim) {}
  ComplexVec(std::initializer_list<Complex> init) : c_(init) {}
  explicit ComplexVec(std::vector<Complex> c) : c_(std::move(c)) {}

  std::size_t dim() const noexcept { return c_.size(); }
  Complex operator[](std::size_t i) const { return c_[i]; }
  Complex& operator[](std::size_t i) { return c_[i]; }
  std::span<const Complex> components() const noexcept { return c_; }
  auto begin() const noexcept { return c_.begin(); }
  auto end() const noexcept { return c_.end(); }

  ComplexVec& operator+=(const ComplexVec& o);
  ComplexVec& operator-=(const ComplexVec& o);
  ComplexVec& operator*=(Complex s);

  double norm(NormKind kind) const noexcept;

  friend bool operator==(const ComplexVec&, const ComplexVec&) = default;

 private:
  std::vector<Complex> c_;
};

ComplexVec operator+(ComplexVec a, const ComplexVec& b);
ComplexVec operator-(ComplexVec a, const ComplexVec& b);
ComplexVec operator-(ComplexVec a);
ComplexVec operator*(Complex s, ComplexVec a);
ComplexVec operator*(ComplexVec a, Complex s);

inline constexpr double kCoeffTol = 1e-14;
inline constexpr double kDefaultFreqTol = 1e-9;

struct TrigTerm {
  double freq = 0.0;
  ComplexVec coeff;
};

/// Canonical form: strictly increasing frequencies, no coefficient with norm
/// <= kCoeffTol. The empty term list is the zero function.
class TrigPolynomial {
 public:
  TrigPolynomial(std::size_t dim, NormKind kind);

  /// Merges frequencies within freq_tol of a cluster's smallest frequency,
  /// sums their coefficients, drops negligible terms and sorts.
  static TrigPolynomial canonicalize(std::size_t dim, NormKind kind, std::vector<TrigTerm> terms,
                                     double freq_tol = kDefaultFreqTol);

  std::size_t dim() const noexcept { return dim_; }
  NormKind norm_kind() const noexcept { return kind_; }
  std::span<const TrigTerm> terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }

  ComplexVec operator()(double t) const;

  /// sum_j ||c_j||, a global bound on ||f||_inf.
  double coefficient_sum() const noexcept;

 private:
  std::size_t dim_;
  NormKind kind_;
  std::vector<TrigTerm> terms_;
};

ComplexVec evaluate(const TrigPolynomial& f, double t);

TrigPolynomial add(const TrigPolynomial& f, const TrigPolynomial& g);
TrigPolynomial scale(const TrigPolynomial& f, Complex c);
/// exp(-i r t) f(t): every frequency shifts down by r.
TrigPolynomial modulate(const TrigPolynomial& f, double r);
/// t -> f(t + a)
TrigPolynomial translate(const TrigPolynomial& f, double a);
/// t -> f(b t), b != 0
TrigPolynomial dilate(const TrigPolynomial& f, double b);
TrigPolynomial constant(const ComplexVec& value, NormKind kind);

/// Lambda_f = sum_j ||c_j|| |lambda_j|, a global Lipschitz constant of f.
double lipschitz_bound(const TrigPolynomial& f);

/// Frequencies (2k+1) pi / omega; the realized f satisfies f(t + omega) = -f(t).
struct AntiPeriodicSpec {
  double omega = 1.0;
  std::vector<std::pair<int, ComplexVec>> harmonics;  // (odd index 2k+1, coefficient)
};

TrigPolynomial generate_antiperiodic(const AntiPeriodicSpec& spec, NormKind kind);

/// Seeded generator used by `gen anti`: odd indices 2k+1 with k uniform in 0..7,
/// coefficient components uniform in the unit disc. Portable across standard
/// libraries (only the raw mt19937_64 stream is used).
AntiPeriodicSpec random_antiperiodic_spec(double omega, int terms, std::size_t dim,
                                          std::uint64_t seed);

/// Uniform grid samples with piecewise-linear interpolation in between.
class SampledFunction {
 public:
  SampledFunction(double t0, double dt, std::vector<ComplexVec> values,
                  std::optional<double> lipschitz = std::nullopt);

  double t0() const noexcept { return t0_; }
  double dt() const noexcept { return dt_; }
  double t_end() const noexcept { return t0_ + dt_ * static_cast<double>(values_.size() - 1); }
  std::size_t dim() const noexcept { return values_.front().dim(); }
  std::span<const ComplexVec> values() const noexcept { return values_; }
  std::optional<double> lipschitz() const noexcept { return lipschitz_; }

  /// Throws ValidationError outside [t0, t_end].
  ComplexVec operator()(double t) const;

  /// Largest ||v_{k+1} - v_k|| / dt; checks a declared lipschitz bound.
  double observed_slope(NormKind kind) const;

 private:
  double t0_;
  double dt_;
  std::vector<ComplexVec> values_;
  std::optional<double> lipschitz_;
};

/// Anything evaluable t -> C^d on a domain, with an optional Lipschitz constant.
class Signal {
 public:
  using Fn = std::function<ComplexVec(double)>;

  Signal(std::size_t dim, NormKind kind, Fn fn, std::optional<double> lipschitz = std::nullopt,
         double domain_lo = -std::numeric_limits<double>::infinity(),
         double domain_hi = std::numeric_limits<double>::infinity());
  Signal(const TrigPolynomial& f);  // NOLINT(google-explicit-constructor)
  Signal(const SampledFunction& f, NormKind kind);

  ComplexVec operator()(double t) const { return fn_(t); }
  std::size_t dim() const noexcept { return dim_; }
  NormKind norm_kind() const noexcept { return kind_; }
  std::optional<double> lipschitz() const noexcept { return lipschitz_; }
  double domain_lo() const noexcept { return lo_; }
  double domain_hi() const noexcept { return hi_; }
  /// Non-null when the signal wraps a trigonometric polynomial.
  const TrigPolynomial* trig() const noexcept { return trig_ ? &*trig_ : nullptr; }

 private:
  std::size_t dim_;
  NormKind kind_;
  Fn fn_;
  std::optional<double> lipschitz_;
  double lo_;
  double hi_;
  std::optional<TrigPolynomial> trig_;
};

Signal operator+(const Signal& f, const Signal& g);

}  // namespace apl

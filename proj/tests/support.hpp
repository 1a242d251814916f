#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "apl/signals.hpp"

namespace apl::test {

inline constexpr double kPi = std::numbers::pi;

inline TrigPolynomial scalar_poly(std::vector<std::pair<double, Complex>> terms,
                                  NormKind kind = NormKind::Euclidean) {
  std::vector<TrigTerm> ts;
  for (auto& [f, c] : terms) ts.push_back({f, ComplexVec{c}});
  return TrigPolynomial::canonicalize(1, kind, std::move(ts));
}

// cos(w t)
inline TrigPolynomial cos_poly(double w = 1.0) { return scalar_poly({{-w, 0.5}, {w, 0.5}}); }

// cos^2 t = 1/2 + e^{2it}/4 + e^{-2it}/4
inline TrigPolynomial cos2_poly() { return scalar_poly({{0.0, 0.5}, {2.0, 0.25}, {-2.0, 0.25}}); }

// sin(pi t) + sin(sqrt2 pi t)
inline TrigPolynomial flagship() {
  const double a = kPi, b = std::numbers::sqrt2 * kPi;
  const Complex m{0.0, -0.5}, p{0.0, 0.5};
  return scalar_poly({{a, m}, {-a, p}, {b, m}, {-b, p}});
}

inline TrigPolynomial flagship_plus5() { return add(flagship(), scalar_poly({{0.0, 5.0}})); }

inline double flagship_value(double t) {
  return std::sin(kPi * t) + std::sin(std::numbers::sqrt2 * kPi * t);
}

struct Rng {
  std::mt19937_64 gen;
  explicit Rng(std::uint64_t seed) : gen(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen); }
  Complex complex(double r = 1.0) { return {uniform(-r, r), uniform(-r, r)}; }
  ComplexVec vec(std::size_t d, double r = 1.0) {
    ComplexVec v(d);
    for (std::size_t i = 0; i < d; ++i) v[i] = complex(r);
    return v;
  }
};

// Random polynomial with frequencies in [-fmax, fmax] pairwise separated by >= sep.
inline TrigPolynomial random_poly(Rng& rng, int max_terms, std::size_t dim, double fmax = 5.0,
                                  double sep = 0.1, NormKind kind = NormKind::Euclidean) {
  const int n = rng.integer(1, max_terms);
  std::vector<double> freqs;
  while (static_cast<int>(freqs.size()) < n) {
    const double f = rng.uniform(-fmax, fmax);
    bool ok = true;
    for (double g : freqs) ok = ok && std::abs(f - g) >= sep;
    if (ok) freqs.push_back(f);
  }
  std::vector<TrigTerm> ts;
  for (double f : freqs) ts.push_back({f, rng.vec(dim)});
  return TrigPolynomial::canonicalize(dim, kind, std::move(ts));
}

// Independent evaluation used as an oracle.
inline std::vector<Complex> naive_eval(const TrigPolynomial& f, double t) {
  std::vector<Complex> out(f.dim());
  for (const auto& term : f.terms()) {
    const Complex e = std::exp(Complex{0.0, term.freq * t});
    for (std::size_t i = 0; i < f.dim(); ++i) out[i] += term.coeff[i] * e;
  }
  return out;
}

inline double norm_of(const std::vector<Complex>& v, NormKind kind) {
  double acc = 0.0;
  for (const Complex& z : v) acc = kind == NormKind::Max ? std::max(acc, std::abs(z)) : acc + std::norm(z);
  return kind == NormKind::Max ? acc : std::sqrt(acc);
}

inline double dist(const ComplexVec& a, const ComplexVec& b, NormKind kind = NormKind::Euclidean) {
  return (a - b).norm(kind);
}

}  // namespace apl::test

#include "apl/signals.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "apl/errors.hpp"

namespace apl {

const char* to_string(NormKind kind) noexcept {
  return kind == NormKind::Euclidean ? "euclidean" : "max";
}

namespace {

void require_same_dim(std::size_t a, std::size_t b) {
  if (a != b) {
    std::ostringstream os;
    os << "dimension mismatch: " << a << " vs " << b;
    throw ValidationError(os.str());
  }
}

bool finite(const ComplexVec& v) {
  return std::all_of(v.begin(), v.end(),
                     [](Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

}  // namespace

ComplexVec& ComplexVec::operator+=(const ComplexVec& o) {
  require_same_dim(dim(), o.dim());
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
  return *this;
}

ComplexVec& ComplexVec::operator-=(const ComplexVec& o) {
  require_same_dim(dim(), o.dim());
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
  return *this;
}

ComplexVec& ComplexVec::operator*=(Complex s) {
  for (auto& z : c_) z *= s;
  return *this;
}

double ComplexVec::norm(NormKind kind) const noexcept {
  if (kind == NormKind::Max) {
    double m = 0.0;
    for (auto z : c_) m = std::max(m, std::abs(z));
    return m;
  }
  double s = 0.0;
  for (auto z : c_) s += std::norm(z);
  return std::sqrt(s);
}

ComplexVec operator+(ComplexVec a, const ComplexVec& b) { return a += b; }
ComplexVec operator-(ComplexVec a, const ComplexVec& b) { return a -= b; }
ComplexVec operator-(ComplexVec a) { return a *= Complex(-1.0, 0.0); }
ComplexVec operator*(Complex s, ComplexVec a) { return a *= s; }
ComplexVec operator*(ComplexVec a, Complex s) { return a *= s; }

// ---------------------------------------------------------------------------

TrigPolynomial::TrigPolynomial(std::size_t dim, NormKind kind) : dim_(dim), kind_(kind) {
  if (dim == 0) throw ValidationError("dim must be >= 1");
}

TrigPolynomial TrigPolynomial::canonicalize(std::size_t dim, NormKind kind,
                                            std::vector<TrigTerm> terms, double freq_tol) {
  if (!(freq_tol >= 0.0) || !std::isfinite(freq_tol))
    throw ValidationError("freq_tol must be finite and >= 0");
  TrigPolynomial out(dim, kind);
  for (const auto& term : terms) {
    if (!std::isfinite(term.freq)) throw ValidationError("non-finite frequency");
    require_same_dim(term.coeff.dim(), dim);
    if (!finite(term.coeff)) throw ValidationError("non-finite coefficient");
  }
  std::stable_sort(terms.begin(), terms.end(),
                   [](const TrigTerm& a, const TrigTerm& b) { return a.freq < b.freq; });

  std::size_t i = 0;
  while (i < terms.size()) {
    TrigTerm merged = terms[i];
    std::size_t j = i + 1;
    while (j < terms.size() && terms[j].freq - merged.freq <= freq_tol) {
      merged.coeff += terms[j].coeff;
      ++j;
    }
    if (merged.coeff.norm(kind) > kCoeffTol) out.terms_.push_back(std::move(merged));
    i = j;
  }
  return out;
}

ComplexVec TrigPolynomial::operator()(double t) const {
  ComplexVec v(dim_);
  for (const auto& term : terms_) {
    const Complex e = std::polar(1.0, term.freq * t);
    for (std::size_t i = 0; i < dim_; ++i) v[i] += term.coeff[i] * e;
  }
  return v;
}

double TrigPolynomial::coefficient_sum() const noexcept {
  double s = 0.0;
  for (const auto& term : terms_) s += term.coeff.norm(kind_);
  return s;
}

ComplexVec evaluate(const TrigPolynomial& f, double t) { return f(t); }

TrigPolynomial add(const TrigPolynomial& f, const TrigPolynomial& g) {
  require_same_dim(f.dim(), g.dim());
  if (f.norm_kind() != g.norm_kind()) throw ValidationError("norm kind mismatch");
  std::vector<TrigTerm> terms(f.terms().begin(), f.terms().end());
  terms.insert(terms.end(), g.terms().begin(), g.terms().end());
  return TrigPolynomial::canonicalize(f.dim(), f.norm_kind(), std::move(terms));
}

TrigPolynomial scale(const TrigPolynomial& f, Complex c) {
  std::vector<TrigTerm> terms(f.terms().begin(), f.terms().end());
  for (auto& term : terms) term.coeff *= c;
  return TrigPolynomial::canonicalize(f.dim(), f.norm_kind(), std::move(terms));
}

TrigPolynomial modulate(const TrigPolynomial& f, double r) {
  if (!std::isfinite(r)) throw ValidationError("modulation frequency must be finite");
  std::vector<TrigTerm> terms(f.terms().begin(), f.terms().end());
  for (auto& term : terms) term.freq -= r;
  return TrigPolynomial::canonicalize(f.dim(), f.norm_kind(), std::move(terms));
}

TrigPolynomial translate(const TrigPolynomial& f, double a) {
  if (!std::isfinite(a)) throw ValidationError("translation must be finite");
  std::vector<TrigTerm> terms(f.terms().begin(), f.terms().end());
  for (auto& term : terms) term.coeff *= std::polar(1.0, term.freq * a);
  return TrigPolynomial::canonicalize(f.dim(), f.norm_kind(), std::move(terms));
}

TrigPolynomial dilate(const TrigPolynomial& f, double b) {
  if (b == 0.0 || !std::isfinite(b)) throw ValidationError("dilation factor must be finite and nonzero");
  std::vector<TrigTerm> terms(f.terms().begin(), f.terms().end());
  for (auto& term : terms) term.freq *= b;
  return TrigPolynomial::canonicalize(f.dim(), f.norm_kind(), std::move(terms));
}

TrigPolynomial constant(const ComplexVec& value, NormKind kind) {
  return TrigPolynomial::canonicalize(value.dim(), kind, {TrigTerm{0.0, value}});
}

double lipschitz_bound(const TrigPolynomial& f) {
  double s = 0.0;
  for (const auto& term : f.terms()) s += term.coeff.norm(f.norm_kind()) * std::abs(term.freq);
  return s;
}

TrigPolynomial generate_antiperiodic(const AntiPeriodicSpec& spec, NormKind kind) {
  if (!(spec.omega > 0.0) || !std::isfinite(spec.omega)) throw ValidationError("omega must be > 0");
  if (spec.harmonics.empty()) throw ValidationError("at least one harmonic is required");
  const std::size_t dim = spec.harmonics.front().second.dim();
  std::vector<TrigTerm> terms;
  terms.reserve(spec.harmonics.size());
  for (const auto& [index, coeff] : spec.harmonics) {
    if (index % 2 == 0) {
      std::ostringstream os;
      os << "harmonic index " << index << " is even";
      throw ValidationError(os.str());
    }
    terms.push_back({static_cast<double>(index) * std::numbers::pi / spec.omega, coeff});
  }
  return TrigPolynomial::canonicalize(dim, kind, std::move(terms));
}

AntiPeriodicSpec random_antiperiodic_spec(double omega, int terms, std::size_t dim,
                                          std::uint64_t seed) {
  if (terms < 1) throw ValidationError("terms must be >= 1");
  if (dim < 1) throw ValidationError("dim must be >= 1");
  std::mt19937_64 rng(seed);
  auto unit = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  AntiPeriodicSpec spec;
  spec.omega = omega;
  for (int n = 0; n < terms; ++n) {
    const int k = static_cast<int>(rng() % 8);
    ComplexVec c(dim);
    for (std::size_t i = 0; i < dim; ++i) {
      double x = 0.0;
      double y = 0.0;
      do {
        x = 2.0 * unit() - 1.0;
        y = 2.0 * unit() - 1.0;
      } while (x * x + y * y > 1.0);
      c[i] = Complex(x, y);
    }
    spec.harmonics.emplace_back(2 * k + 1, std::move(c));
  }
  return spec;
}

// ---------------------------------------------------------------------------

SampledFunction::SampledFunction(double t0, double dt, std::vector<ComplexVec> values,
                                 std::optional<double> lipschitz)
    : t0_(t0), dt_(dt), values_(std::move(values)), lipschitz_(lipschitz) {
  if (!std::isfinite(t0)) throw ValidationError("t0 must be finite");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ValidationError("dt must be > 0");
  if (values_.empty()) throw ValidationError("values must be nonempty");
  const std::size_t d = values_.front().dim();
  if (d == 0) throw ValidationError("dim must be >= 1");
  for (const auto& v : values_) {
    require_same_dim(v.dim(), d);
    if (!finite(v)) throw ValidationError("non-finite sample");
  }
  if (lipschitz_ && (!(*lipschitz_ >= 0.0) || !std::isfinite(*lipschitz_)))
    throw ValidationError("lipschitz must be finite and >= 0");
}

ComplexVec SampledFunction::operator()(double t) const {
  const double x = (t - t0_) / dt_;
  const double last = static_cast<double>(values_.size() - 1);
  // half-ulp slack at the right edge for grids computed as t0 + k*dt
  if (!(x >= -1e-9) || x > last + 1e-9) {
    std::ostringstream os;
    os << "t = " << t << " outside sampled domain [" << t0_ << ", " << t_end() << "]";
    throw ValidationError(os.str());
  }
  const double xc = std::clamp(x, 0.0, last);
  const auto k = static_cast<std::size_t>(std::min(std::floor(xc), std::max(last - 1.0, 0.0)));
  if (values_.size() == 1) return values_.front();
  const double w = xc - static_cast<double>(k);
  return (1.0 - w) * values_[k] + Complex(w, 0.0) * values_[k + 1];
}

double SampledFunction::observed_slope(NormKind kind) const {
  double s = 0.0;
  for (std::size_t k = 0; k + 1 < values_.size(); ++k)
    s = std::max(s, (values_[k + 1] - values_[k]).norm(kind) / dt_);
  return s;
}

// ---------------------------------------------------------------------------

Signal::Signal(std::size_t dim, NormKind kind, Fn fn, std::optional<double> lipschitz,
               double domain_lo, double domain_hi)
    : dim_(dim), kind_(kind), fn_(std::move(fn)), lipschitz_(lipschitz), lo_(domain_lo),
      hi_(domain_hi) {
  if (dim == 0) throw ValidationError("dim must be >= 1");
  if (!fn_) throw ValidationError("signal needs a callable");
}

Signal::Signal(const TrigPolynomial& f)
    : dim_(f.dim()), kind_(f.norm_kind()), fn_([f](double t) { return f(t); }),
      lipschitz_(lipschitz_bound(f)), lo_(-std::numeric_limits<double>::infinity()),
      hi_(std::numeric_limits<double>::infinity()), trig_(f) {}

Signal::Signal(const SampledFunction& f, NormKind kind)
    : dim_(f.dim()), kind_(kind), fn_([f](double t) { return f(t); }),
      lipschitz_(f.lipschitz() ? f.lipschitz() : std::optional<double>(f.observed_slope(kind))),
      lo_(f.t0()), hi_(f.t_end()) {
  if (f.lipschitz() && f.observed_slope(kind) > *f.lipschitz() * (1.0 + 1e-12))
    throw ValidationError("declared lipschitz bound is violated by consecutive samples");
}

Signal operator+(const Signal& f, const Signal& g) {
  require_same_dim(f.dim(), g.dim());
  std::optional<double> lip;
  if (f.lipschitz() && g.lipschitz()) lip = *f.lipschitz() + *g.lipschitz();
  return Signal(
      f.dim(), f.norm_kind(), [f, g](double t) { return f(t) + g(t); }, lip,
      std::max(f.domain_lo(), g.domain_lo()), std::min(f.domain_hi(), g.domain_hi()));
}

}  // namespace apl

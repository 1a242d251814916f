#include "doctest_main.hpp"
#include "support.hpp"

#include "apl/bohr.hpp"
#include "apl/errors.hpp"

using namespace apl;
using namespace apl::test;

namespace {

// |(1/T) int_0^T e^{i d s} ds| <= 2 / (|d| T): analytic envelope of the leakage from each term
double leakage_envelope(const TrigPolynomial& f, double r, double T) {
  double s = 0.0;
  for (const auto& term : f.terms()) {
    const double d = std::abs(term.freq - r);
    if (d > 1e-9) s += term.coeff.norm(f.norm_kind()) * std::min(1.0, 2.0 / (d * T));
  }
  return s;
}

double numeric_error(const TrigPolynomial& f, double r, double T) {
  const auto num = bohr_numeric(f, r, T, default_quad_step(f, r));
  return (num.value - bohr_exact(f, r).value).norm(f.norm_kind());
}

}  // namespace

TEST_CASE("bohr_exact") {
  const auto b = bohr_exact(flagship(), kPi);
  CHECK(b.method == BohrMethod::Exact);
  CHECK(b.value[0] == Complex{0.0, -0.5});
  CHECK(bohr_exact(flagship(), 0.0).value[0] == Complex{});
  CHECK(bohr_exact(flagship_plus5(), 0.0).value[0] == Complex{5.0});
  CHECK(bohr_exact(flagship(), kPi + 1e-12).value[0] == Complex{0.0, -0.5});
  CHECK(bohr_exact(flagship(), kPi + 1e-6).value[0] == Complex{});
}

TEST_CASE("bohr_numeric examples") {
  const auto c = bohr_numeric(scalar_poly({{0.0, Complex{2.0, -1.0}}}), 0.0, 37.0, 0.1);
  CHECK(std::abs(c.value[0] - Complex{2.0, -1.0}) < 1e-13);
  CHECK(c.method == BohrMethod::Numeric);
  CHECK(c.horizon == 37.0);

  const auto z = bohr_numeric(cos_poly(), 0.0, 2000.0, default_quad_step(cos_poly(), 0.0));
  CHECK(std::abs(z.value[0]) <= 1.0 / 2000.0 + 1e-9);
  CHECK(std::abs(z.value[0] - Complex{std::sin(2000.0) / 2000.0}) < 1e-9);

  const auto h = bohr_numeric(cos_poly(), 1.0, 2000.0, default_quad_step(cos_poly(), 1.0));
  CHECK(std::abs(h.value[0] - Complex{0.5}) <= 0.002);

  CHECK_THROWS_AS(bohr_numeric(cos_poly(), 0.0, 0.0, 0.1), ValidationError);
  CHECK_THROWS_AS(bohr_numeric(cos_poly(), 0.0, 10.0, -0.1), ValidationError);
  CHECK(default_quad_step(cos_poly(), 0.0) <= 2 * kPi / 20.0);
}

TEST_CASE("numeric-exact agreement and O(1/T) leakage envelope") {
  Rng rng(123);
  for (int i = 0; i < 10; ++i) {
    const auto f = random_poly(rng, 6, 2);
    const double sum = f.coefficient_sum();
    for (const auto& term : f.terms()) {
      for (double T : {2000.0, 4000.0}) {
        const auto num = bohr_numeric(f, term.freq, T, default_quad_step(f, term.freq));
        const double err = (num.value - bohr_exact(f, term.freq).value).norm(f.norm_kind());
        CHECK(err <= 0.02 * sum);
        CHECK(err <= leakage_envelope(f, term.freq, T) + 1e-9);
        REQUIRE(num.shifted_value.has_value());
        CHECK((*num.shifted_value - num.value).norm(f.norm_kind()) <= 0.02 * sum);
      }
    }
  }
}

TEST_CASE("decay from T to 2T for a single off-resonance term") {
  // leakage is 2|sin(dT/2)| / (dT): 0.759 at dT = 2.5 and 0.239 at dT = 5
  const double d = 2.5 / 2000.0;
  const auto f = scalar_poly({{0.0, 1.0}, {d, 1.0}});
  const double e1 = numeric_error(f, 0.0, 2000.0);
  const double e2 = numeric_error(f, 0.0, 4000.0);
  CHECK(e1 == doctest::Approx(2 * std::sin(1.25) / 2.5).epsilon(1e-6));
  CHECK(e2 == doctest::Approx(2 * std::sin(2.5) / 5.0).epsilon(1e-6));
  CHECK(e1 / e2 >= 1.5);
}

TEST_CASE("linearity of the exact transform") {
  Rng rng(2);
  for (int i = 0; i < 50; ++i) {
    const auto f = random_poly(rng, 5, 2, 5.0, 0.1);
    const auto g = random_poly(rng, 5, 2, 5.0, 0.1);
    for (const auto& term : f.terms()) {
      const auto lhs = bohr_exact(add(f, g), term.freq).value;
      const auto rhs = bohr_exact(f, term.freq).value + bohr_exact(g, term.freq).value;
      bool near_other = false;
      for (const auto& gt : g.terms()) near_other = near_other || std::abs(gt.freq - term.freq) <= 1e-9;
      if (!near_other) CHECK(lhs == rhs);
    }
  }
  const auto f = cos_poly();
  CHECK(bohr_exact(add(f, f), 1.0).value == bohr_exact(f, 1.0).value + bohr_exact(f, 1.0).value);
}

TEST_CASE("spectrum and exact synthesis") {
  const auto s = spectrum(cos_poly());
  REQUIRE(s.entries.size() == 2);
  CHECK(s.entries[0].freq == -1.0);
  CHECK(s.entries[0].norm == 0.5);
  CHECK(s.entries[1].freq == 1.0);
  CHECK(spectrum(TrigPolynomial(1, NormKind::Euclidean)).entries.empty());
  const auto fl = spectrum(flagship());
  REQUIRE(fl.entries.size() == 4);
  CHECK(fl.entries[0].freq == doctest::Approx(-std::numbers::sqrt2 * kPi));
  for (const auto& e : fl.entries) CHECK(e.norm == doctest::Approx(0.5));

  Rng rng(3);
  for (int i = 0; i < 30; ++i) {
    const auto f = random_poly(rng, 8, 3);
    const auto g = synthesize(spectrum(f), f.dim(), f.norm_kind());
    REQUIRE(g.terms().size() == f.terms().size());
    for (std::size_t k = 0; k < f.terms().size(); ++k) {
      CHECK(g.terms()[k].freq == f.terms()[k].freq);
      CHECK(g.terms()[k].coeff == f.terms()[k].coeff);
    }
  }
}

TEST_CASE("ANP membership") {
  const auto two = add(cos_poly(1.0), cos_poly(2.0));
  const auto v = anp_membership(two);
  CHECK(v.is_member);
  CHECK(v.distance == 0.0);
  CHECK_FALSE(v.note.empty());

  const auto w = anp_membership(flagship_plus5());
  CHECK_FALSE(w.is_member);
  CHECK(std::abs(w.distance - 5.0) <= 1e-12);

  Rng rng(4);
  for (int i = 0; i < 20; ++i) {
    const auto f = generate_antiperiodic(random_antiperiodic_spec(rng.uniform(0.1, 10), 6, 2, std::uint64_t(i)),
                                         NormKind::Euclidean);
    CHECK(anp_membership(f).is_member);
  }
  CHECK(anp_membership(scalar_poly({{0.0, 1e-11}})).is_member);
  CHECK_FALSE(anp_membership(scalar_poly({{0.0, 1e-11}}), 0.0).is_member);
}

TEST_CASE("distance to ANP") {
  const auto d = anp_distance(flagship_plus5());
  CHECK(std::abs(d.distance - 5.0) <= 1e-12);
  REQUIRE(d.anp_part.terms().size() == 4);
  for (double t : {0.0, 0.7, 13.1}) CHECK(std::abs(d.anp_part(t)[0] - flagship()(t)[0]) < 1e-12);
  CHECK(anp_distance(cos_poly()).distance == 0.0);

  Rng rng(5);
  for (int i = 0; i < 30; ++i) {
    auto f = random_poly(rng, 5, 2);
    f = add(f, TrigPolynomial::canonicalize(2, NormKind::Euclidean, {{0.0, rng.vec(2)}}));
    const auto dist_f = anp_distance(f);
    // functional bound: any explicit element of ANP is at least as far
    const auto h = modulate(random_poly(rng, 5, 2), 0.0);
    const auto g = TrigPolynomial::canonicalize(
        2, NormKind::Euclidean,
        [&] {
          std::vector<TrigTerm> ts;
          for (const auto& t : h.terms())
            if (std::abs(t.freq) > 1e-6) ts.push_back(t);
          return ts;
        }());
    double sup_fg = 0.0, sup_witness = 0.0;
    for (int k = 0; k <= 20000; ++k) {
      const double t = 0.01 * k;
      sup_fg = std::max(sup_fg, (f(t) - g(t)).norm(NormKind::Euclidean));
      sup_witness = std::max(sup_witness, (f(t) - dist_f.anp_part(t)).norm(NormKind::Euclidean));
    }
    CHECK(dist_f.distance <= sup_fg + 1e-9);
    CHECK(std::abs(sup_witness - dist_f.distance) <= 1e-12);
  }
}

TEST_CASE("AP_Lambda test") {
  const auto f = add(cos_poly(1.0), cos_poly(2.0));  // spectrum {-2, -1, 1, 2}
  const auto one_two = [](double r) {
    return std::abs(std::abs(r) - 1.0) < 1e-9 || std::abs(std::abs(r) - 2.0) < 1e-9;
  };
  const auto a = ap_lambda_test(f, one_two);
  CHECK(a.holds);
  CHECK_FALSE(a.reduction.empty());
  CHECK(a.evidence.size() == 4);

  const auto only_one = [](double r) { return std::abs(std::abs(r) - 1.0) < 1e-9; };
  const auto b = ap_lambda_test(f, only_one);
  CHECK_FALSE(b.holds);
  bool saw = false;
  for (const auto& e : b.evidence)
    if (std::abs(std::abs(e.r) - 2.0) < 1e-9) {
      saw = true;
      CHECK_FALSE(e.modulated_member);
      CHECK(e.mean_norm > 0.0);
    }
  CHECK(saw);

  const auto nonzero = [](double r) { return r != 0.0; };
  Rng rng(6);
  for (int i = 0; i < 20; ++i) {
    auto g = random_poly(rng, 5, 1);
    if (i % 2) g = add(g, scalar_poly({{0.0, 1.0}}));
    CHECK(ap_lambda_test(g, nonzero).holds == anp_membership(g).is_member);
  }
}

TEST_CASE("averaging over a full antiperiod cancels") {
  Rng rng(7);
  for (int i = 0; i < 20; ++i) {
    const double omega = rng.uniform(0.1, 10.0);
    const auto f = generate_antiperiodic(random_antiperiodic_spec(omega, 5, 2, std::uint64_t(100 + i)),
                                         NormKind::Euclidean);
    double lam = 0.0;
    for (const auto& t : f.terms()) lam = std::max(lam, std::abs(t.freq));
    const double step = 2 * kPi / lam / 40.0;
    const auto m = mean_over(f, 0.0, 2 * omega, step);
    CHECK(m.norm(NormKind::Euclidean) <= 1e-6 * f.coefficient_sum());
    // int_0^omega [f(s) + f(s + omega)] ds vanishes identically
    const auto half = mean_over(Signal(add(f, translate(f, omega))), 0.0, omega, step);
    CHECK(half.norm(NormKind::Euclidean) <= 1e-12 * std::max(1.0, f.coefficient_sum()));
  }
}

TEST_CASE("sampled signals average on their domain only") {
  std::vector<ComplexVec> vals(101, ComplexVec{Complex{2.0}});
  const Signal s(SampledFunction(0.0, 0.1, vals), NormKind::Euclidean);
  CHECK_THROWS_AS(bohr_numeric(s, 0.0, 100.0, 0.1), ValidationError);
}

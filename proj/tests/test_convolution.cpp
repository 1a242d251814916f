#include "doctest_main.hpp"
#include "support.hpp"

#include "apl/convolution.hpp"
#include "apl/errors.hpp"
#include "apl/quadrature.hpp"
#include "apl/stepanov.hpp"

using namespace apl;
using namespace apl::test;

namespace {

const double kM = 1.0 / (1.0 - std::exp(-1.0));

std::vector<double> grid(double a, double b, double h) {
  std::vector<double> g;
  const auto n = static_cast<int>(std::lround((b - a) / h));
  for (int k = 0; k <= n; ++k) g.push_back(a + h * k);
  return g;
}

// Lower incomplete gamma by its power series: x^s e^{-x} sum x^k / (s (s+1) ... (s+k))
double lower_gamma(double s, double x) {
  double term = 1.0 / s, sum = term;
  for (int k = 1; k < 200; ++k) {
    term *= x / (s + k);
    sum += term;
  }
  return std::pow(x, s) * std::exp(-x) * sum;
}

Signal exp_decay() {
  return Signal(1, NormKind::Euclidean, [](double t) { return ComplexVec{Complex{std::exp(-t)}}; }, 1.0, 0.0);
}

}  // namespace

TEST_CASE("kernel construction and norms") {
  CHECK_THROWS_AS(Kernel(0.0, 1.0, 1, {1.0}), ValidationError);
  CHECK_THROWS_AS(Kernel(1.0, 0.0, 1, {1.0}), ValidationError);
  CHECK_THROWS_AS(Kernel(1.0, 1.5, 1, {1.0}), ValidationError);
  CHECK_THROWS_AS(Kernel(1.0, 1.0, 2, {1.0}), ValidationError);

  const Kernel k(1.0, 1.0, 2, {1.0, 2.0, 3.0, 4.0});
  CHECK(k.operator_norm(NormKind::Max) == doctest::Approx(7.0));
  CHECK(k.operator_norm(NormKind::Euclidean) == doctest::Approx(5.464985704219043).epsilon(1e-12));
  const auto y = k.apply(ComplexVec{Complex{1.0}, Complex{0.0, 1.0}});
  CHECK(y[0] == Complex{1.0, 2.0});
  CHECK(y[1] == Complex{3.0, 4.0});
  CHECK(k.scaled(3.0).operator_norm(NormKind::Max) == doctest::Approx(21.0));
  CHECK(Kernel::identity(3).operator_norm(NormKind::Euclidean) == doctest::Approx(1.0));
  CHECK(Kernel(2.0, 0.5, 1, {1.0}).profile(4.0) == doctest::Approx(0.5 * std::exp(-8.0)));
}

TEST_CASE("kernel files") {
  const Kernel k = parse_kernel(R"({"type":"exp_matrix","b":2,"gamma":0.5,"matrix":[[[1,0],[0,1]],[[0,0],[2,0]]]})");
  CHECK(k.dim() == 2);
  CHECK(k.gamma() == 0.5);
  CHECK(k.matrix()[1] == Complex{0.0, 1.0});
  CHECK(parse_kernel(to_json(k).dump()).matrix()[3] == Complex{2.0});
  CHECK_THROWS_AS(parse_kernel(R"({"type":"other","b":1,"gamma":1,"matrix":[[[1,0]]]})"), ValidationError);
  CHECK_THROWS_AS(parse_kernel(R"({"type":"exp_matrix","b":1,"gamma":1,"matrix":[[[1,0],[1,0]]]})"), ValidationError);
  CHECK_THROWS_AS(parse_kernel(R"({"type":"exp_matrix","b":-1,"gamma":1,"matrix":[[[1,0]]]})"), ValidationError);
}

TEST_CASE("L^q norms on unit cells") {
  const Kernel k = Kernel::identity(1);
  CHECK(lq_norm(k, kInf, 0.0, NormKind::Euclidean) == doctest::Approx(1.0).epsilon(1e-15));
  for (int c = 0; c < 6; ++c)
    CHECK(lq_norm(k, 2.0, c, NormKind::Euclidean) ==
          doctest::Approx(std::exp(-c) * std::sqrt((1 - std::exp(-2.0)) / 2)).epsilon(1e-10));

  // int_0^1 t^{q(g-1)} e^{-bqt} dt = lower_gamma(alpha, bq) / (bq)^alpha
  const Kernel s(1.0, 0.5, 1, {1.0});
  for (double q : {1.0, 1.5, 1.9}) {
    const double alpha = q * (0.5 - 1.0) + 1.0;
    const double oracle = std::pow(lower_gamma(alpha, q) / std::pow(q, alpha), 1.0 / q);
    CHECK(lq_norm(s, q, 0.0, NormKind::Euclidean) == doctest::Approx(oracle).epsilon(1e-9));
  }
  CHECK_THROWS_AS(lq_norm(s, 2.0, 0.0, NormKind::Euclidean), NumericError);
  CHECK_THROWS_AS(lq_norm(s, kInf, 0.0, NormKind::Euclidean), NumericError);
  CHECK(lq_norm(s, kInf, 1.0, NormKind::Euclidean) == doctest::Approx(std::exp(-1.0)));
  CHECK_THROWS_AS(lq_norm(k, 0.5, 0.0, NormKind::Euclidean), ValidationError);
}

TEST_CASE("summability constants") {
  const Kernel k = Kernel::identity(1);
  const auto r = summability(k, kInf, 1e-12, NormKind::Euclidean);
  CHECK(std::abs(r.upper() - kM) <= 1e-8);
  CHECK(r.upper() >= kM - 1e-15);
  CHECK(r.tail_bound <= 1e-12);
  CHECK(r.truncation_K == static_cast<int>(r.per_k_norms.size()));

  for (double s : {0.5, 3.0, 10.0})
    CHECK(std::abs(summability_shifted(k, kInf, s, NormKind::Euclidean) - std::exp(-s) * kM) <= 1e-8);
  CHECK(summability_shifted(k, kInf, 0.0, NormKind::Euclidean) ==
        summability(k, kInf, 1e-13, NormKind::Euclidean).M);

  const auto r2 = summability(k, 2.0, 1e-12, NormKind::Euclidean);
  CHECK(std::abs(r2.upper() - kM * std::sqrt((1 - std::exp(-2.0)) / 2)) <= 1e-8);

  CHECK(summability(k.scaled(3.0), kInf, 1e-12, NormKind::Euclidean).upper() ==
        doctest::Approx(3 * r.upper()).epsilon(1e-12));

  CHECK_THROWS_AS(summability(Kernel(1.0, 0.5, 1, {1.0}), kInf, 1e-12, NormKind::Euclidean), NumericError);
  CHECK(std::isfinite(summability(Kernel(1.0, 0.5, 1, {1.0}), 1.5, 1e-12, NormKind::Euclidean).upper()));
}

TEST_CASE("condition windows") {
  const Kernel k = Kernel::identity(1);
  // int_t^{t+1} m_s ds = M (e^{-t} - e^{-t-1}) = e^{-t} for q = inf
  for (double t : {5.0, 10.0, 30.0})
    CHECK(condition_ii_window(k, 1.0, t, NormKind::Euclidean) == doctest::Approx(std::exp(-t)).epsilon(1e-7));
  CHECK(condition_ii_window(k, 1.0, 30.0, NormKind::Euclidean) <= 1e-10);
  // int_1^s e^{-r} e^{-(s-r)} dr = (s-1) e^{-s}, whose window integral is t e^{-t} - (t+1) e^{-t-1}
  for (double t : {5.0, 10.0, 30.0}) {
    const double oracle = t * std::exp(-t) - (t + 1) * std::exp(-t - 1);
    CHECK(condition_i_window(k, exp_decay(), 1.0, 1.0, t, NormKind::Euclidean) ==
          doctest::Approx(oracle).epsilon(1e-6));
  }
}

TEST_CASE("infinite convolution against closed forms") {
  const Kernel k = Kernel::identity(1);
  const auto ts = grid(0.0, 10.0, 0.05);
  const auto r = convolve_infinite(k, cos_poly(), ts);
  double worst = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i)
    worst = std::max(worst, std::abs(r.values[i][0] - Complex{(std::cos(ts[i]) + std::sin(ts[i])) / 2}));
  CHECK(worst <= 1e-6);
  CHECK(r.tail_error_bound <= 1e-10);
  CHECK(r.truncation_S > 1.0);

  const auto z = convolve_infinite(k, TrigPolynomial(1, NormKind::Euclidean), ts);
  for (const auto& v : z.values) CHECK(v[0] == Complex{});

  // int_0^inf s^{-1/2} e^{-s} e^{i(t-s)} ds = e^{it} sqrt(pi) / sqrt(1+i)
  const Kernel sing(1.0, 0.5, 1, {1.0});
  const auto e = scalar_poly({{1.0, 1.0}});
  ConvolutionOptions fine;
  fine.quad_step = 0.002;
  const auto rs = convolve_infinite(sing, e, grid(0.0, 3.0, 0.5), fine);
  for (std::size_t i = 0; i < rs.t_grid.size(); ++i) {
    const Complex oracle = std::exp(Complex{0, rs.t_grid[i]}) * std::sqrt(kPi) / std::sqrt(Complex{1, 1});
    CHECK(std::abs(rs.values[i][0] - oracle) <= 1e-6);
  }

  ConvolutionOptions capped;
  capped.s_cap = 5.0;
  CHECK_THROWS_AS(convolve_infinite(k, cos_poly(), ts, capped), NumericError);
  CHECK_THROWS_AS(convolve_infinite(Kernel::identity(2), cos_poly(), ts), ValidationError);
}

TEST_CASE("anti-periodicity passes through the convolution") {
  Rng rng(41);
  const Kernel k = Kernel::identity(2);
  for (int i = 0; i < 5; ++i) {
    const double omega = rng.uniform(0.5, 5.0);
    const auto f = generate_antiperiodic(random_antiperiodic_spec(omega, 3, 2, std::uint64_t(i)),
                                         NormKind::Euclidean);
    double lam = 0.0;
    for (const auto& t : f.terms()) lam = std::max(lam, std::abs(t.freq));
    ConvolutionOptions o;
    o.quad_step = std::min(0.01, 2 * kPi / lam / 40);
    std::vector<double> ts = grid(0.0, 5.0, 0.25);
    const std::size_t n = ts.size();
    for (std::size_t j = 0; j < n; ++j) ts.push_back(ts[j] + omega);
    const auto r = convolve_infinite(k, f, ts, o);
    for (std::size_t j = 0; j < n; ++j)
      CHECK((r.values[j] + r.values[n + j]).norm(NormKind::Euclidean) <=
            2 * (r.quad_error_bound + r.tail_error_bound) + 1e-12);
  }
}

TEST_CASE("finite convolution") {
  const Kernel k = Kernel::identity(1);
  const auto ts = grid(0.0, 10.0, 0.05);
  const auto h = convolve_finite(k, Signal(cos_poly()), ts);
  double worst = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i)
    worst = std::max(worst, std::abs(h.values[i][0] -
                                     Complex{(std::cos(ts[i]) + std::sin(ts[i]) - std::exp(-ts[i])) / 2}));
  CHECK(worst <= 1e-6);
  CHECK(h.values[0][0] == Complex{});

  const auto z = convolve_finite(k, Signal(TrigPolynomial(1, NormKind::Euclidean)), ts);
  for (const auto& v : z.values) CHECK(v[0] == Complex{});

  CHECK(convolve_finite(Kernel(1.0, 0.5, 1, {1.0}), Signal(cos_poly()), std::vector<double>{0.0}).values[0][0] ==
        Complex{});
  CHECK_THROWS_AS(convolve_finite(k, Signal(cos_poly()), std::vector<double>{-1.0}), ValidationError);
  std::vector<ComplexVec> vals(11, ComplexVec{Complex{1.0}});
  const Signal short_f(SampledFunction(0.0, 1.0, vals), NormKind::Euclidean);
  CHECK_THROWS_AS(convolve_finite(k, short_f, std::vector<double>{12.0}), ValidationError);
}

TEST_CASE("linearity, boundedness, and the two forms of G") {
  Rng rng(42);
  const Kernel k = Kernel::identity(2);
  const auto ts = grid(-5.0, 5.0, 0.5);
  for (int i = 0; i < 5; ++i) {
    const auto g1 = random_poly(rng, 4, 2, 3.0);
    const auto g2 = random_poly(rng, 4, 2, 3.0);
    const auto a = convolve_infinite(k, g1, ts);
    const auto b = convolve_infinite(k, g2, ts);
    const auto s = convolve_infinite(k, add(g1, g2), ts);
    const double tol = a.quad_error_bound + b.quad_error_bound + s.quad_error_bound + 1e-12;
    for (std::size_t j = 0; j < ts.size(); ++j) {
      CHECK((s.values[j] - a.values[j] - b.values[j]).norm(NormKind::Euclidean) <= 2 * tol);
      // ||G|| <= ||R||_{L^1} sup ||g||, with ||R||_{L^1} = 1 here
      CHECK(a.values[j].norm(NormKind::Euclidean) <= g1.coefficient_sum() + a.tail_error_bound + a.quad_error_bound);
      // G(t) = int_{t-S}^t R(t-s) g(s) ds, integrated directly in s
      const double t = ts[j];
      const auto direct = quad::simpson([&](double s) { return std::exp(-(t - s)) * g1(s); }, t - a.truncation_S, t,
                                        quad::panel_count(t - a.truncation_S, t, 0.005), 2);
      CHECK((direct - a.values[j]).norm(NormKind::Euclidean) <= 1e-6);
    }
  }
}

TEST_CASE("transfer check") {
  const Kernel k = Kernel::identity(1);
  const auto exact = classify(cos_poly(), DefectMode::Anti, kPi, 1e-12);
  REQUIRE(exact.status == CertStatus::Certified);
  const auto t0 = transfer_check(k, cos_poly(), exact, kInf);
  CHECK(t0.ok);
  CHECK(t0.measured_defect <= 2 * t0.tolerance + t0.M * exact.eps);

  const auto f = flagship();
  const auto cert = classify(f, DefectMode::Anti, 29.0, 0.05);
  REQUIRE(cert.status == CertStatus::Certified);
  TransferOptions o;
  o.conv.quad_step = std::min(0.01, 2 * kPi / (std::numbers::sqrt2 * kPi) / 40);
  const auto t1 = transfer_check(k, f, cert, kInf, o);
  CHECK(std::abs(t1.M - kM) <= 1e-8);
  CHECK(t1.ok);
  CHECK(t1.measured_defect <= kM * 0.05 + 2 * t1.tolerance);

  const auto t3 = transfer_check(k.scaled(3.0), f, cert, kInf, o);
  CHECK(t3.M == doctest::Approx(3 * t1.M).epsilon(1e-12));
  CHECK(t3.ok);
  CHECK(t3.measured_defect == doctest::Approx(3 * t1.measured_defect).epsilon(1e-9));

  const auto refuted = classify(cos2_poly(), DefectMode::Anti, 1.0, 0.5);
  CHECK_THROWS_AS(transfer_check(k, cos2_poly(), refuted, kInf), ValidationError);
}

TEST_CASE("transfer inequality over a scan of an anti-periodic signal") {
  const double omega = 1.0;
  const AntiPeriodicSpec spec{omega, {{1, ComplexVec{Complex{0.6, 0.2}}}, {3, ComplexVec{Complex{-0.1, 0.3}}}}};
  const auto g = generate_antiperiodic(spec, NormKind::Euclidean);
  ScanOptions so;
  so.eps = 0.3 * g.coefficient_sum();
  so.tau_max = 12.0;
  so.tau_step = 0.01;
  const auto report = scan(g, so);
  REQUIRE(report.certified_taus.size() >= 50);
  double lam = 0.0;
  for (const auto& t : g.terms()) lam = std::max(lam, std::abs(t.freq));
  TransferOptions o;
  o.t_grid = grid(0.0, 5.0, 0.25);
  o.conv.quad_step = std::min(0.01, 2 * kPi / lam / 40);
  int checked = 0;
  for (const auto& c : report.certificates) {
    if (c.status != CertStatus::Certified) continue;
    CHECK(transfer_check(Kernel::identity(1), g, c, kInf, o).ok);
    ++checked;
  }
  CHECK(checked >= 50);
}

TEST_CASE("asymptotic conditions") {
  const Kernel k = Kernel::identity(1);
  const AsymptoticDecomposition d{cos_poly(), exp_decay()};
  const auto verified = verify_decomposition(Signal(cos_poly()) + exp_decay(), d, StepanovParams{});
  REQUIRE(verified.all_ok());
  const auto v = asymptotic_conditions_check(k, d, verified, 1.0, 1.0, 30.0);
  REQUIRE(v.checkpoints.size() == 4);
  CHECK(v.checkpoints.back().condition_i <= 1e-9);
  CHECK(v.checkpoints.back().condition_ii <= 1e-10);
  CHECK(v.condition_i_ok);
  CHECK(v.condition_ii_ok);
  CHECK(v.late_window_diff <= 1e-4);
  CHECK(v.all_ok());
  CHECK(std::isinf(v.q));

  DecompositionVerdict unverified = verified;
  unverified.c0_ok = false;
  CHECK_THROWS_AS(asymptotic_conditions_check(k, d, unverified, 1.0, 1.0, 30.0), ValidationError);
}

#include "apl/quadrature.hpp"

#include <algorithm>

#include "apl/errors.hpp"

namespace apl::quad {

std::size_t panel_count(double a, double b, double max_step) {
  if (!(max_step > 0.0)) throw ValidationError("quadrature step must be > 0");
  const double len = std::abs(b - a);
  auto n = static_cast<std::size_t>(std::ceil(len / max_step - 1e-9));
  n = std::max<std::size_t>(n, 4);
  return (n + 3) / 4 * 4;
}

double simpson(const std::function<double(double)>& fn, double a, double b, std::size_t n) {
  if (n == 0 || n % 2 != 0) throw ValidationError("Simpson needs an even number of panels");
  const double h = (b - a) / static_cast<double>(n);
  double s = fn(a) + fn(b);
  for (std::size_t k = 1; k < n; ++k) s += (k % 2 == 1 ? 4.0 : 2.0) * fn(a + h * static_cast<double>(k));
  return s * h / 3.0;
}

ComplexVec simpson(const std::function<ComplexVec(double)>& fn, double a, double b, std::size_t n,
                   std::size_t dim) {
  if (n == 0 || n % 2 != 0) throw ValidationError("Simpson needs an even number of panels");
  const double h = (b - a) / static_cast<double>(n);
  ComplexVec s = fn(a) + fn(b);
  if (s.dim() != dim) throw ValidationError("integrand dimension mismatch");
  for (std::size_t k = 1; k < n; ++k)
    s += Complex(k % 2 == 1 ? 4.0 : 2.0, 0.0) * fn(a + h * static_cast<double>(k));
  return s *= Complex(h / 3.0, 0.0);
}

namespace {

struct Panel {
  double a, m, b;
  double fa, fm, fb;
  double whole;
};

double recurse(const std::function<double(double)>& fn, const Panel& p, double tol, int depth) {
  const double lm = 0.5 * (p.a + p.m);
  const double rm = 0.5 * (p.m + p.b);
  const double flm = fn(lm);
  const double frm = fn(rm);
  const double left = (p.m - p.a) / 6.0 * (p.fa + 4.0 * flm + p.fm);
  const double right = (p.b - p.m) / 6.0 * (p.fm + 4.0 * frm + p.fb);
  const double diff = left + right - p.whole;
  if (std::abs(diff) <= 15.0 * tol) return left + right + diff / 15.0;
  if (depth <= 0) throw NumericError("adaptive Simpson: recursion limit reached before tolerance");
  return recurse(fn, {p.a, lm, p.m, p.fa, flm, p.fm, left}, 0.5 * tol, depth - 1) +
         recurse(fn, {p.m, rm, p.b, p.fm, frm, p.fb, right}, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& fn, double a, double b, double tol,
                        int max_depth) {
  if (a == b) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = fn(a);
  const double fm = fn(m);
  const double fb = fn(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return recurse(fn, {a, m, b, fa, fm, fb, whole}, tol, max_depth);
}

}  // namespace apl::quad

#pragma once

#include <cmath>
#include <cstddef>
#include <functional>

#include "apl/signals.hpp"

namespace apl::quad {

/// Composite Simpson on n panels (n a positive multiple of 4) together with
/// the rule on n/2 panels built from the even nodes. |fine - coarse| is the
/// declared error estimate for `fine`.
template <typename T>
struct SimpsonPair {
  T fine;
  T coarse;
};

/// Smallest multiple of 4 panels whose width does not exceed max_step.
std::size_t panel_count(double a, double b, double max_step);

template <typename T, typename F>
SimpsonPair<T> simpson_pair(F&& fn, double a, double b, std::size_t n, T zero) {
  const double h = (b - a) / static_cast<double>(n);
  T fine = zero;
  T coarse = zero;
  for (std::size_t k = 0; k <= n; ++k) {
    const double t = (k == n) ? b : a + h * static_cast<double>(k);
    const T v = fn(t);
    const bool end = (k == 0 || k == n);
    const double wf = end ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
    fine += wf * v;
    if (k % 2 == 0) {
      const std::size_t m = k / 2;
      const double wc = end ? 1.0 : (m % 2 == 1 ? 4.0 : 2.0);
      coarse += wc * v;
    }
  }
  fine *= h / 3.0;
  coarse *= 2.0 * h / 3.0;
  return {fine, coarse};
}

/// Plain composite Simpson on n (even) panels.
double simpson(const std::function<double(double)>& fn, double a, double b, std::size_t n);

/// Composite Simpson for C^d-valued integrands on n (even) panels.
ComplexVec simpson(const std::function<ComplexVec(double)>& fn, double a, double b,
                   std::size_t n, std::size_t dim);

/// Adaptive Simpson with absolute tolerance; throws NumericError when the
/// recursion limit is hit before the tolerance is met.
double adaptive_simpson(const std::function<double(double)>& fn, double a, double b, double tol,
                        int max_depth = 50);

}  // namespace apl::quad

#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <vector>

namespace satqkd::math {

struct QuadratureOptions {
  double rel_tol = 1e-8;
  std::size_t max_evals = 1'000'000;
  int max_depth = 60;
};

namespace detail {

template <class F>
struct SimpsonWorker {
  const F& f;
  const QuadratureOptions& opt;
  std::size_t evals = 0;

  double eval(double x) {
    ++evals;
    return f(x);
  }

  // classic adaptive Simpson with Richardson correction
  double recurse(double a, double b, double fa, double fm, double fb,
                 double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = eval(lm), frm = eval(rm);
    const double h = b - a;
    const double left = h / 12.0 * (fa + 4.0 * flm + fm);
    const double right = h / 12.0 * (fm + 4.0 * frm + fb);
    const double s2 = left + right;
    if (depth >= opt.max_depth || evals >= opt.max_evals ||
        std::abs(s2 - whole) <= 15.0 * tol) {
      return s2 + (s2 - whole) / 15.0;
    }
    return recurse(a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
           recurse(m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
  }

  double run(double a, double b) {
    if (a == b) return 0.0;
    const double fa = eval(a), fb = eval(b), fm = eval(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    // absolute budget derived from a first coarse estimate; floor keeps
    // near-zero integrals from demanding infinite refinement
    const double tol =
        opt.rel_tol * std::max(std::abs(whole), 1e-300) + 1e-300;
    return recurse(a, b, fa, fm, fb, whole, tol, 0);
  }
};

}  // namespace detail

template <class F>
double integrate(const F& f, double a, double b,
                 const QuadratureOptions& opt = {}) {
  detail::SimpsonWorker<F> w{f, opt};
  return w.run(a, b);
}

// Integrate with forced initial breakpoints (useful when the integrand has
// features on scales far below the interval length, e.g. the ground layer
// of an atmospheric profile under a 500 km path).
template <class F>
double integrate_segmented(const F& f, double a, double b,
                           std::vector<double> knots,
                           const QuadratureOptions& opt = {}) {
  knots.push_back(a);
  knots.push_back(b);
  std::sort(knots.begin(), knots.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    const double lo = std::max(a, knots[i]);
    const double hi = std::min(b, knots[i + 1]);
    if (hi > lo) total += integrate(f, lo, hi, opt);
  }
  return total;
}

}  // namespace satqkd::math

#include "antsel/quadrature.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "antsel/errors.hpp"

namespace antsel {

namespace {

double simpson(double fa, double fm, double fb, double h) {
  return h / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_step(const std::function<double(double)>& f, double a, double b,
                     double fa, double fm, double fb, double whole, double tol,
                     int depth, int force) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson(fa, flm, fm, m - a);
  const double right = simpson(fm, frm, fb, b - m);
  const double delta = left + right - whole;
  if (force <= 0 && std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  if (depth <= 0)
    throw NumericalError("integrate_adaptive: no convergence on [" + std::to_string(a) +
                         ", " + std::to_string(b) + "], local error " +
                         std::to_string(std::abs(delta) / 15.0) + " > tol " +
                         std::to_string(tol));
  return adaptive_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, force - 1) +
         adaptive_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, force - 1);
}

}  // namespace

double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double abs_tol, int max_depth, int min_depth) {
  if (!(b >= a) || !std::isfinite(a) || !std::isfinite(b))
    throw std::invalid_argument("integrate_adaptive: bad interval");
  if (!(abs_tol > 0.0))
    throw std::invalid_argument("integrate_adaptive: abs_tol must be > 0");
  if (min_depth > max_depth)
    throw std::invalid_argument("integrate_adaptive: min_depth exceeds max_depth");
  if (a == b) return 0.0;
  const double fa = f(a);
  const double m = 0.5 * (a + b);
  const double fm = f(m);
  const double fb = f(b);
  const double whole = simpson(fa, fm, fb, b - a);
  return adaptive_step(f, a, b, fa, fm, fb, whole, abs_tol, max_depth, min_depth);
}

}  // namespace antsel

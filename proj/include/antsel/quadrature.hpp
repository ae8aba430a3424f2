#pragma once

#include <functional>

namespace antsel {

// Adaptive Simpson integration of f over [a, b]. The local acceptance test is
// the usual |S_fine - S_coarse| <= 15 * tol Richardson bound; tol is split in
// half per bisection. min_depth forces that many bisection levels before the
// acceptance test applies, so integrands whose support is a narrow slice of
// [a, b] cannot fool the initial coarse samples. Throws NumericalError with
// the offending subinterval when max_depth bisections do not reach the
// tolerance.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double abs_tol, int max_depth = 52, int min_depth = 10);

}  // namespace antsel

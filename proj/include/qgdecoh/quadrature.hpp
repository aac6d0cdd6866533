#pragma once

#include <functional>
#include <initializer_list>

namespace qgdecoh {

// Adaptive Gauss-Kronrod (31-point) integral of f over [a, b]. Throws
// NumericError, tagged with `what`, when the error estimate exceeds
// rel_tol times the L1 norm of f on the interval.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol, const char* what);

// Same, split at the given ascending breakpoints (first and last are the
// integration limits). Use it where f has a kink.
double integrate(const std::function<double(double)>& f,
                 std::initializer_list<double> breakpoints, double rel_tol,
                 const char* what);

}  // namespace qgdecoh

#include "qgdecoh/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <string>

#include "qgdecoh/errors.hpp"

namespace qgdecoh {

namespace {
constexpr unsigned kMaxDepth = 24;
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol, const char* what) {
  if (a == b) return 0.0;
  // The library's subdivision test is only consistent on unit-scale
  // intervals, so integrate over [-1, 1] with the Jacobian folded in.
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  auto g = [&](double x) { return f(mid + half * x) * half; };
  double error = 0.0;
  double l1 = 0.0;
  const double value =
      boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
          g, -1.0, 1.0, kMaxDepth, rel_tol, &error, &l1);
  const double floor = std::numeric_limits<double>::min();
  if (!std::isfinite(value) || error > rel_tol * std::max(l1, floor) + floor)
    throw NumericError(std::string("quadrature did not converge for ") + what +
                       " (error estimate " + std::to_string(error) +
                       ", L1 " + std::to_string(l1) + ")");
  return value;
}

double integrate(const std::function<double(double)>& f,
                 std::initializer_list<double> breakpoints, double rel_tol,
                 const char* what) {
  double total = 0.0;
  const double* prev = nullptr;
  for (const double& x : breakpoints) {
    if (prev) total += integrate(f, *prev, x, rel_tol, what);
    prev = &x;
  }
  return total;
}

}  // namespace qgdecoh

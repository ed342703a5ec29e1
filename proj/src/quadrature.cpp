#include "opdyn/quadrature.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/sinh_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <algorithm>
#include <limits>
#include <sstream>

namespace opdyn::quad {
namespace {

// Accept estimates up to this multiple of the requested tolerance; the
// Boost estimators are conservative by roughly this factor.
constexpr double kSlack = 100.0;

Result checked(const char* method, double value, double error, double l1, double rel_tol, double abs_tol = 0.0) {
  const double scale = std::max(std::abs(value), l1 * 1e-3);
  if (!std::isfinite(value) || error > kSlack * rel_tol * scale + abs_tol + 1e-300) {
    std::ostringstream os;
    os << method << ": quadrature did not converge (value " << value << ", error estimate " << error
       << ", L1 " << l1 << ", requested rel tol " << rel_tol << ")";
    throw NumericalError(os.str());
  }
  return {value, error, l1};
}

}  // namespace

Result finite(const Integrand& f, double a, double b, double rel_tol, double abs_tol) {
  thread_local boost::math::quadrature::tanh_sinh<double> integrator(15);
  double error = 0.0;
  double l1 = 0.0;
  const double v = integrator.integrate(f, a, b, rel_tol, &error, &l1);
  return checked("tanh_sinh", v, error, l1, rel_tol, abs_tol);
}

Result half_line(const Integrand& f, double a, double rel_tol) {
  thread_local boost::math::quadrature::exp_sinh<double> integrator(9);
  double error = 0.0;
  double l1 = 0.0;
  const double v = integrator.integrate([&](double x) { return f(a + x); }, 0.0,
                                        std::numeric_limits<double>::infinity(), rel_tol, &error, &l1);
  return checked("exp_sinh", v, error, l1, rel_tol);
}

Result real_line(const Integrand& f, double rel_tol) {
  thread_local boost::math::quadrature::sinh_sinh<double> integrator(9);
  double error = 0.0;
  double l1 = 0.0;
  const double v = integrator.integrate(f, rel_tol, &error, &l1);
  return checked("sinh_sinh", v, error, l1, rel_tol);
}

Result smooth(const Integrand& f, double a, double b, double rel_tol, unsigned max_depth, double abs_tol) {
  double error = 0.0;
  double l1 = 0.0;
  const double v = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, max_depth, rel_tol,
                                                                                  &error, &l1);
  return checked("gauss_kronrod", v, error, l1, rel_tol, abs_tol);
}

}  // namespace opdyn::quad

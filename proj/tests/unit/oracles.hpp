#pragma once

// Reference values computed independently of the library code paths.

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/bessel.hpp>

#include <cmath>
#include <functional>

namespace oracle {

/// K_n(x) = int_0^inf exp(-x cosh t) cosh(n t) dt
inline double bessel_k_integral(int n, double x) {
  thread_local boost::math::quadrature::exp_sinh<double> q;
  return q.integrate(
      [&](double t) {
        const double a = -x * std::cosh(t);
        if (a < -740.0) return 0.0;
        return 0.5 * (std::exp(a + n * t) + std::exp(a - n * t));
      },
      1e-14);
}

/// exp(x) K_n(x) from the same representation, written without overflow.
inline double bessel_k_scaled_integral(int n, double x) {
  thread_local boost::math::quadrature::exp_sinh<double> q;
  return q.integrate(
      [&](double t) {
        const double s = std::sinh(0.5 * t);
        const double a = -2.0 * x * s * s;
        if (a < -740.0) return 0.0;
        return 0.5 * (std::exp(a + n * t) + std::exp(a - n * t));
      },
      1e-14);
}

inline double bessel_k_boost(int n, double x) { return boost::math::cyl_bessel_k(n, x); }

/// int_{-inf}^{inf} g(p) dp by substitution p = sinh(y0 + y), |y| <= y_max.
inline double real_line(const std::function<double(double)>& g, double y_max = 40.0, double y0 = 0.0) {
  thread_local boost::math::quadrature::tanh_sinh<double> q;
  auto h = [&](double y) { return g(std::sinh(y0 + y)) * std::cosh(y0 + y); };
  return q.integrate(h, -y_max, 0.0, 1e-13) + q.integrate(h, 0.0, y_max, 1e-13);
}

/// int_a^b g with endpoint singularities allowed.
inline double finite(const std::function<double(double)>& g, double a, double b) {
  thread_local boost::math::quadrature::tanh_sinh<double> q;
  return q.integrate(g, a, b, 1e-13);
}

/// Rest-frame equilibrium energy per particle as a ratio of two quadratures:
/// e = int p0 exp(-chi p0) dp / int exp(-chi p0) dp, computed with exp(-chi (p0 - 1)).
inline double energy_density_quadrature(double chi) {
  auto w = [chi](double p) {
    const double p0 = std::hypot(1.0, p);
    return std::exp(-chi * (p * p / (p0 + 1.0)));
  };
  const double y = std::acosh(1.0 + 800.0 / chi);
  const double num = real_line([&](double p) { return std::hypot(1.0, p) * w(p); }, y);
  const double den = real_line(w, y);
  return num / den;
}

inline double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace oracle

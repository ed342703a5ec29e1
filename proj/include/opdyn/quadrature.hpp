#pragma once

// Thin wrappers over Boost.Math double-exponential and Gauss-Kronrod
// quadrature with a uniform error policy: a result whose error estimate
// exceeds the requested tolerance raises NumericalError.

#include <functional>
#include <stdexcept>
#include <string>

namespace opdyn::quad {

class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Result {
  double value = 0.0;
  double error = 0.0;
  double l1_norm = 0.0;
};

using Integrand = std::function<double(double)>;

/// Finite interval [a, b]; endpoint singularities allowed (tanh-sinh).
[[nodiscard]] Result finite(const Integrand& f, double a, double b, double rel_tol = 1e-12, double abs_tol = 0.0);

/// [a, +inf) (exp-sinh).
[[nodiscard]] Result half_line(const Integrand& f, double a, double rel_tol = 1e-12);

/// (-inf, +inf) (sinh-sinh).
[[nodiscard]] Result real_line(const Integrand& f, double rel_tol = 1e-12);

/// Adaptive 61-point Gauss-Kronrod on [a, b] for smooth integrands. Errors
/// below abs_tol are accepted regardless of the relative tolerance.
[[nodiscard]] Result smooth(const Integrand& f, double a, double b, double rel_tol = 1e-12,
                            unsigned max_depth = 30, double abs_tol = 0.0);

}  // namespace opdyn::quad

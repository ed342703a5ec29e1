#pragma once

// (1+1)-dimensional relativistic kinematics for unit-mass opinions.
//
// An opinion m in (-1, 1) plays the role of a velocity; the particle state is
// its momentum p = m / sqrt(1 - m^2). Every finite p maps back to |m| < 1, so
// the opinion bound never has to be enforced explicitly.

#include <cmath>

namespace opdyn {

/// Minkowski two-vector (a0, a1) with metric diag(1, -1).
struct TwoVector {
  double a0 = 0.0;
  double a1 = 0.0;

  friend constexpr TwoVector operator+(TwoVector a, TwoVector b) { return {a.a0 + b.a0, a.a1 + b.a1}; }
  friend constexpr TwoVector operator-(TwoVector a, TwoVector b) { return {a.a0 - b.a0, a.a1 - b.a1}; }
  friend constexpr TwoVector operator*(double s, TwoVector a) { return {s * a.a0, s * a.a1}; }
  friend constexpr bool operator==(TwoVector, TwoVector) = default;

  /// Metric index lowering: (a0, -a1).
  [[nodiscard]] constexpr TwoVector lowered() const { return {a0, -a1}; }
};

/// a . b = a0 b0 - a1 b1
[[nodiscard]] constexpr double dot(TwoVector a, TwoVector b) { return a.a0 * b.a0 - a.a1 * b.a1; }

/// Metric component eta^{ab} for a, b in {0, 1}.
[[nodiscard]] constexpr double eta(int a, int b) { return a != b ? 0.0 : (a == 0 ? 1.0 : -1.0); }

/// Single-particle state. Only the spatial momentum is stored.
class Momentum {
 public:
  constexpr Momentum() = default;
  constexpr explicit Momentum(double p) : p_(p) {}

  [[nodiscard]] constexpr double p() const { return p_; }
  /// p^0 = sqrt(1 + p^2) >= 1
  [[nodiscard]] double energy() const { return std::hypot(1.0, p_); }
  /// m = p / p^0, always strictly inside (-1, 1) for finite p
  [[nodiscard]] double opinion() const { return p_ / energy(); }
  /// Lorentz factor gamma(m) = p^0
  [[nodiscard]] double gamma() const { return energy(); }
  [[nodiscard]] TwoVector four() const { return {energy(), p_}; }

  friend constexpr bool operator==(Momentum, Momentum) = default;

 private:
  double p_ = 0.0;
};

/// gamma(m) = 1 / sqrt(1 - m^2). Throws std::domain_error for |m| >= 1.
[[nodiscard]] double lorentz_factor(double m);

/// p = m gamma(m). Throws std::domain_error for |m| >= 1 or non-finite m.
[[nodiscard]] Momentum opinion_to_momentum(double m);

[[nodiscard]] inline double momentum_to_opinion(Momentum p) { return p.opinion(); }

/// Two-velocity U = gamma(mbar) (1, mbar).
[[nodiscard]] TwoVector flow_vector(double mbar);

/// Moller relative velocity g = sqrt((a.b)^2 - 1) / (a^0 b^0), evaluated in the
/// frame-covariant form. In one spatial dimension this is |m_a - m_b|, so
/// 0 <= g < 2.
[[nodiscard]] double moller_velocity(Momentum a, Momentum b);

/// Centre-of-momentum form 2 Q / P^0, valid only when a and b are in their
/// CM frame (a.p() == -b.p()). Kept for cross-checks.
[[nodiscard]] double moller_velocity_cm(Momentum a, Momentum b);

/// Total and relative two-momenta of a pair.
struct CmDecomposition {
  TwoVector total;     ///< P = a + b
  TwoVector relative;  ///< Q = a - b
  double s = 0.0;      ///< P . P = 4 - Q . Q >= 4
  double q_star = 0.0; ///< sqrt(s)

  [[nodiscard]] constexpr TwoVector first() const { return 0.5 * (total + relative); }
  [[nodiscard]] constexpr TwoVector second() const { return 0.5 * (total - relative); }
};

[[nodiscard]] CmDecomposition cm_decompose(Momentum a, Momentum b);

/// Boost a momentum by velocity v: p' = gamma(v) (p + v p^0).
[[nodiscard]] Momentum boost(Momentum p, double v);

/// Boost a two-vector by velocity v.
[[nodiscard]] TwoVector boost(TwoVector a, double v);

}  // namespace opdyn

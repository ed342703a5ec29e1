#pragma once

// Binary inelastic exchange with random perturbation.
//
// A pair (p, p*) exchanges k = ((1 + L)/2) (p* - p + D): p gains k and p*
// loses it, so the pair momentum is conserved exactly while the pair energy
// sqrt(1+p^2) + sqrt(1+p*^2) is not. L = 1 swaps the momenta (plus D),
// L = 0 sends both to the midpoint (plus -/+ D/2).

#include "opdyn/kinematics.hpp"

#include <utility>

namespace opdyn {

struct CollisionParams {
  double lambda = 0.0;     ///< inelasticity coefficient in [0, 1]
  double delta_amp = 0.0;  ///< perturbation amplitude >= 0

  /// Throws std::invalid_argument when out of range.
  void validate() const;
};

struct CollisionOutcome {
  Momentum p_out;
  Momentum pstar_out;
  double delta_used = 0.0;
  double energy_change = 0.0;
};

/// delta_amp (2u - 1) for u in [0, 1].
[[nodiscard]] constexpr double sample_delta(double delta_amp, double u) {
  return delta_amp * (2.0 * u - 1.0);
}

[[nodiscard]] CollisionOutcome collide_direct(Momentum p, Momentum pstar, const CollisionParams& params,
                                              double delta);

/// Pre-collision pair that the direct rule maps onto (p, pstar) when delta = 0.
/// Throws std::domain_error for lambda == 0 (the direct map is then singular).
[[nodiscard]] std::pair<Momentum, Momentum> collide_inverse(Momentum p, Momentum pstar,
                                                            const CollisionParams& params, double delta);

/// |1/L + (1/2)(1 + 1/L)(dD/dp* - dD/dp)|^-1.
/// Throws std::domain_error for lambda == 0 or a vanishing bracket.
[[nodiscard]] double jacobian(const CollisionParams& params, double d_delta_dp, double d_delta_dpstar);

/// Sum of p^0 after minus sum of p^0 before. Written as a difference of
/// square roots that does not cancel catastrophically for small changes.
[[nodiscard]] double energy_change(std::pair<Momentum, Momentum> before, std::pair<Momentum, Momentum> after);

}  // namespace opdyn

#pragma once

// One-dimensional Maxwell-Juttner equilibrium
//
//   f(p) = n / (2 K_1(chi)) exp(-chi p.U),   U = gamma(mbar) (1, mbar).
//
// Measure conventions: f is a scalar. Integrated against dp/p^0 it gives the
// moments N^a = n U^a and T^ab; integrated against dp it gives N^0 = n U^0.
// Particle ensembles therefore sample the density f(p) in dp. The density of
// opinions in dm is f(p(m)) gamma(m)^3 since dp/dm = gamma^3.
//
// All Bessel functions are taken in scaled form so chi up to 1e6 and beyond
// evaluates without overflow.

#include "opdyn/kinematics.hpp"
#include "opdyn/random.hpp"

#include <initializer_list>
#include <vector>

namespace opdyn {

struct MjState {
  double n = 1.0;     ///< rest-frame density, > 0
  double mbar = 0.0;  ///< mean opinion, |mbar| < 1
  double chi = 1.0;   ///< inverse temperature 1/theta, > 0

  /// Throws std::domain_error when out of range.
  void validate() const;
  [[nodiscard]] TwoVector flow() const { return flow_vector(mbar); }
};

/// Value of f at p.
[[nodiscard]] double mj_pdf(Momentum p, const MjState& state);

/// Draws p from the density proportional to f(p) in dp. Rest-frame samples come
/// from rejection against a flat-core/exponential-tail envelope; a sign flip
/// with probability max(0, -mbar m) reweights them by (1 + mbar m) = p'^0 / p^0
/// before the boost, which turns the rest-frame dp density into the lab-frame one.
[[nodiscard]] Momentum mj_sample(const MjState& state, Rng& rng);

/// Fully symmetric rank-r tensor over two-dimensional indices, r <= 4.
class Tensor {
 public:
  explicit Tensor(int rank);

  [[nodiscard]] int rank() const { return rank_; }
  [[nodiscard]] double operator()(std::initializer_list<int> indices) const;
  [[nodiscard]] double& at(std::initializer_list<int> indices);
  [[nodiscard]] double flat(std::size_t k) const { return c_[k]; }
  [[nodiscard]] double& flat(std::size_t k) { return c_[k]; }
  [[nodiscard]] std::size_t size() const { return c_.size(); }

 private:
  [[nodiscard]] std::size_t offset(std::initializer_list<int> indices) const;
  int rank_;
  std::vector<double> c_;
};

/// Equilibrium moments Z^{a1..ar} = int p^a1..p^ar exp(-chi p.U) dp/p^0 for
/// r = 0..4:
///   sum_k (-1)^k 2 K_{r-k}(chi) / chi^k  (sum over k-pairings of eta..eta U..U).
/// With scaled = true every entry is multiplied by exp(chi).
[[nodiscard]] Tensor z_moments(double chi, TwoVector u, int rank, bool scaled = false);

/// Moments of the pair total momentum at fixed invariant mass Q*:
///   Z*^{a1..ar} = int P^a1..P^ar exp(-chi P.U) dP/P^0,  P.P = Q*^2,  r = 0..2.
/// With scaled = true every entry is multiplied by exp(chi Q*).
[[nodiscard]] Tensor z_star_moments(double chi, double q_star, TwoVector u, int rank, bool scaled = false);

/// Energy per particle in the rest frame, e = U T U / n = 1/chi + K_0(chi)/K_1(chi).
[[nodiscard]] double energy_density(double chi);

/// e - 1 without the cancellation of forming e first.
[[nodiscard]] double energy_excess(double chi);

/// Largest inverse temperature reported; colder states are clamped to it.
inline constexpr double kChiCap = 1e9;
inline constexpr double kChiFloor = 1e-9;

/// Inverse of energy_density. Throws std::domain_error for e <= 1.
[[nodiscard]] double chi_from_energy(double e);

/// Inverse of energy_excess; returns kChiCap when the excess is below the
/// excess at the cap, kChiFloor when above the excess at the floor.
[[nodiscard]] double chi_from_excess(double excess);

/// Decision parameter int |p| f dp of a rest-frame equilibrium:
/// n (1 + chi) exp(-chi) / (chi^2 K_1(chi)).
[[nodiscard]] double mj_phi_at_rest(double chi, double n = 1.0);

}  // namespace opdyn

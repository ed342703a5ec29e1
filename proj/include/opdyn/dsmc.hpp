#pragma once

// Particle solver for the homogeneous kinetic equation: N equal-weight
// momenta, binary exchanges selected by no-time-counter sampling against the
// exact majorant g <= 2, and the party drift p -> P + (p - P) exp(-B dt)
// applied in closed form. One step is a collision sweep followed by the drift.

#include "opdyn/collision.hpp"
#include "opdyn/equilibrium.hpp"
#include "opdyn/random.hpp"

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace opdyn {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class SimulationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct InitRange {
  double lo = 0.0;
  double hi = 0.0;
  double weight = 1.0;
};

/// Either a union of uniform-in-m ranges or a Maxwell-Juttner draw.
struct InitialCondition {
  enum class Kind { ranges, equilibrium };
  Kind kind = Kind::ranges;
  std::vector<InitRange> ranges;
  double chi0 = 1.0;   ///< equilibrium only
  double mbar0 = 0.0;  ///< equilibrium only

  void validate() const;
};

enum class Kernel {
  invariant_flux,  ///< pair rate A g / N
  inline_flux      ///< pair rate A g / (N (p0 p*0)^2)
};

struct SimConfig {
  double lambda = 0.0;
  double delta_amp = 0.0;
  double a_rate = 1.0;
  double b_rate = 0.0;
  double m_party = 0.0;
  std::uint64_t n_particles = 100000;
  double dt = 0.05;
  double t_end = 10.0;
  std::uint64_t seed = 1;
  InitialCondition init;
  std::uint64_t output_every = 20;
  Kernel kernel = Kernel::invariant_flux;

  /// Throws ConfigError naming the offending field.
  void validate() const;
  [[nodiscard]] CollisionParams collision() const { return {lambda, delta_amp}; }
  /// Party momentum P = m_p gamma(m_p).
  [[nodiscard]] double party_momentum() const;
  [[nodiscard]] std::uint64_t steps() const;
};

/// Largest A dt (N - 1)/N accepted by SimConfig::validate: expected candidate
/// pairs per particle per step stay at or below this.
inline constexpr double kMaxCandidateLoad = 0.1;

struct EnsembleState {
  std::vector<double> p;
  double time = 0.0;
  std::uint64_t step = 0;
  Rng rng;
  std::uint64_t candidates = 0;
  std::uint64_t collisions = 0;
  double max_g = 0.0;

  [[nodiscard]] double acceptance_ratio() const {
    return candidates == 0 ? 0.0 : static_cast<double>(collisions) / static_cast<double>(candidates);
  }
  [[nodiscard]] std::size_t size() const { return p.size(); }
};

[[nodiscard]] EnsembleState init_ensemble(const SimConfig& config);

/// Fills p from the initial condition using rng.
void sample_initial(const InitialCondition& init, std::vector<double>& p, Rng& rng);

/// One NTC sweep over a step dt.
void collision_step(EnsembleState& state, const SimConfig& config, double dt);

/// Exact drift toward P over dt.
void vlasov_step(EnsembleState& state, const SimConfig& config, double dt);

/// collision_step, then vlasov_step; advances time and the step counter.
void advance(EnsembleState& state, const SimConfig& config, double dt);

struct RunSummary {
  std::uint64_t steps = 0;
  std::uint64_t candidates = 0;
  std::uint64_t collisions = 0;
  double max_g = 0.0;
  double t_final = 0.0;
};

/// Called at t = 0, every output_every steps and at the final step.
using Sink = std::function<void(const EnsembleState&)>;

/// Steps from 0 to t_end. A non-finite momentum aborts with SimulationError
/// carrying the time, particle index and value.
RunSummary run(const SimConfig& config, const Sink& sink);

}  // namespace opdyn

#include "opdyn/dsmc.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

namespace opdyn {
namespace {

[[noreturn]] void config_error(const std::string& field, const std::string& what) {
  throw ConfigError("config field '" + field + "': " + what);
}

void check_finite(const EnsembleState& s, std::size_t i) {
  if (!std::isfinite(s.p[i])) {
    std::ostringstream os;
    os << "non-finite momentum at t = " << s.time << " (step " << s.step << "), particle " << i << ", value "
       << s.p[i] << "; collisions so far " << s.collisions;
    throw SimulationError(os.str());
  }
}

}  // namespace

void InitialCondition::validate() const {
  if (kind == Kind::equilibrium) {
    if (!(chi0 > 0.0) || !std::isfinite(chi0)) config_error("init.chi0", "must be positive");
    if (!(std::abs(mbar0) < 1.0)) config_error("init.mbar0", "must satisfy |mbar0| < 1");
    return;
  }
  if (ranges.empty()) config_error("init.ranges", "at least one range is required");
  for (std::size_t i = 0; i < ranges.size(); ++i) {
    const auto& r = ranges[i];
    const std::string f = "init.ranges[" + std::to_string(i) + "]";
    if (!(r.lo >= -1.0 && r.hi <= 1.0 && r.lo < r.hi)) config_error(f, "need -1 <= lo < hi <= 1");
    if (!(r.weight > 0.0) || !std::isfinite(r.weight)) config_error(f + ".weight", "must be positive");
  }
}

void SimConfig::validate() const {
  if (!(lambda >= 0.0 && lambda <= 1.0)) config_error("lambda", "must lie in [0, 1]");
  if (!(delta_amp >= 0.0) || !std::isfinite(delta_amp)) config_error("delta_amp", "must be finite and >= 0");
  if (!(a_rate > 0.0) || !std::isfinite(a_rate)) config_error("a_rate", "must be positive");
  if (!(b_rate >= 0.0) || !std::isfinite(b_rate)) config_error("b_rate", "must be >= 0");
  if (!(std::abs(m_party) < 1.0)) config_error("m_party", "must satisfy |m_party| < 1");
  if (n_particles < 2) config_error("n_particles", "must be at least 2");
  if (!(dt > 0.0) || !std::isfinite(dt)) config_error("dt", "must be positive");
  if (!(t_end > 0.0) || !std::isfinite(t_end)) config_error("t_end", "must be positive");
  if (output_every == 0) config_error("output_every", "must be positive");
  const double n = static_cast<double>(n_particles);
  if (a_rate * dt * (n - 1.0) / n > kMaxCandidateLoad * (1.0 + 1e-12)) {
    config_error("dt", "a_rate * dt must not exceed " + std::to_string(kMaxCandidateLoad));
  }
  init.validate();
}

double SimConfig::party_momentum() const { return opinion_to_momentum(m_party).p(); }

std::uint64_t SimConfig::steps() const {
  return static_cast<std::uint64_t>(std::ceil(t_end / dt - 1e-9));
}

void sample_initial(const InitialCondition& init, std::vector<double>& p, Rng& rng) {
  if (init.kind == InitialCondition::Kind::equilibrium) {
    const MjState st{1.0, init.mbar0, init.chi0};
    for (double& x : p) x = mj_sample(st, rng).p();
    return;
  }
  // Each range receives mass proportional to its weight, independent of width.
  double total = 0.0;
  for (const auto& r : init.ranges) total += r.weight;
  for (double& x : p) {
    double u = uniform01(rng) * total;
    std::size_t k = 0;
    while (k + 1 < init.ranges.size() && u >= init.ranges[k].weight) {
      u -= init.ranges[k].weight;
      ++k;
    }
    const auto& r = init.ranges[k];
    double m = 0.0;
    do {
      m = r.lo + (r.hi - r.lo) * uniform01(rng);
    } while (!(std::abs(m) < 1.0));
    x = m / std::sqrt((1.0 - m) * (1.0 + m));
  }
}

EnsembleState init_ensemble(const SimConfig& config) {
  config.validate();
  EnsembleState s;
  s.rng.seed(config.seed);
  s.p.resize(config.n_particles);
  sample_initial(config.init, s.p, s.rng);
  return s;
}

void collision_step(EnsembleState& state, const SimConfig& config, double dt) {
  const std::uint64_t n = state.p.size();
  if (n < 2) return;
  // Expected candidates N(N-1)/2 * k_max * dt with k_max = 2A/N.
  const double expected = config.a_rate * static_cast<double>(n - 1) * dt;
  double whole = std::floor(expected);
  if (uniform01(state.rng) < expected - whole) whole += 1.0;
  const auto m_cand = static_cast<std::uint64_t>(whole);
  const double gain = 0.5 * (1.0 + config.lambda);
  const bool perturb = config.delta_amp > 0.0;
  const bool inline_kernel = config.kernel == Kernel::inline_flux;
  double* p = state.p.data();
  for (std::uint64_t c = 0; c < m_cand; ++c) {
    const std::uint64_t i = uniform_index(state.rng, n);
    std::uint64_t j = uniform_index(state.rng, n - 1);
    if (j >= i) ++j;
    const Momentum a{p[i]};
    const Momentum b{p[j]};
    const double g = moller_velocity(a, b);
    if (g > state.max_g) state.max_g = g;
    if (!(g <= 2.0)) {
      check_finite(state, i);
      check_finite(state, j);
      if (std::isnan(g)) {
        std::ostringstream os;
        os << "non-finite momentum arithmetic at t = " << state.time << " (step " << state.step << "): pair " << i
           << ", " << j << " with p = " << p[i] << ", " << p[j] << " overflows; collisions so far " << state.collisions;
        throw SimulationError(os.str());
      }
    }
    if (!(g <= 2.0)) throw std::logic_error("collision_step: Moller velocity above the majorant");
    double accept = 0.5 * g;
    if (inline_kernel) {
      const double e2 = a.energy() * b.energy();
      accept /= e2 * e2;
    }
    if (uniform01(state.rng) >= accept) continue;
    const double delta = perturb ? sample_delta(config.delta_amp, uniform01(state.rng)) : 0.0;
    const double k = gain * (p[j] - p[i] + delta);
    p[i] += k;
    p[j] -= k;
    ++state.collisions;
    check_finite(state, i);
    check_finite(state, j);
  }
  state.candidates += m_cand;
}

void vlasov_step(EnsembleState& state, const SimConfig& config, double dt) {
  if (config.b_rate == 0.0) return;
  const double big_p = config.party_momentum();
  const double decay = std::exp(-config.b_rate * dt);
  for (std::size_t i = 0; i < state.p.size(); ++i) {
    state.p[i] = big_p + (state.p[i] - big_p) * decay;
    check_finite(state, i);
  }
}

void advance(EnsembleState& state, const SimConfig& config, double dt) {
  collision_step(state, config, dt);
  vlasov_step(state, config, dt);
  state.time += dt;
  ++state.step;
}

RunSummary run(const SimConfig& config, const Sink& sink) {
  EnsembleState state = init_ensemble(config);
  const std::uint64_t steps = config.steps();
  if (sink) sink(state);
  for (std::uint64_t s = 0; s < steps; ++s) {
    const double t_next = std::min(config.t_end, static_cast<double>(s + 1) * config.dt);
    advance(state, config, t_next - state.time);
    state.time = t_next;
    if (sink && (state.step % config.output_every == 0 || s + 1 == steps)) sink(state);
  }
  return {state.step, state.candidates, state.collisions, state.max_g, state.time};
}

}  // namespace opdyn

#pragma once

// JSON run configuration.
//
// {
//   "lambda": 0.0,            required, [0, 1]
//   "delta_amp": 0.0,         required, >= 0
//   "b_rate": 0.0,            required, >= 0
//   "t_end": 20.0,            required, > 0
//   "init": {"ranges": [{"lo": 0.99, "hi": 1.0, "weight": 1.0}, ...]}
//        or {"equilibrium": {"chi0": 1.0, "mbar0": 0.0}},   required
//   "a_rate": 1.0, "m_party": 0.0, "n_particles": 100000, "dt": 0.05,
//   "seed": 1, "output_every": 20, "kernel": "invariant_flux" | "inline_flux",
//   "histogram_every": 0,     steps between histogram snapshots, 0 = first and last only
//   "bins": 200,
//   "average_fraction": 0.2   trailing fraction of the run used for converged averages
// }
//
// Unknown keys are rejected.

#include "opdyn/dsmc.hpp"

#include "json.hpp"

#include <filesystem>
#include <string>

namespace opdyn {

struct RunSpec {
  SimConfig sim;
  std::uint64_t histogram_every = 0;
  int bins = 200;
  double average_fraction = 0.2;

  void validate() const;
};

[[nodiscard]] RunSpec parse_config(const nlohmann::json& j);
[[nodiscard]] RunSpec load_config(const std::filesystem::path& path);
[[nodiscard]] nlohmann::json to_json(const RunSpec& spec);

[[nodiscard]] const char* kernel_name(Kernel k);

}  // namespace opdyn

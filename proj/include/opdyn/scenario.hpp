#pragma once

// Presets for the published experiments, the per-run writer and plot-data
// emission.
//
// Output layout for run_preset(name, root):
//   root/<preset>/manifest.json            preset-level manifest (lists runs)
//   root/<preset>/<label>/timeseries.csv   t,n,mbar,chi,theta,Pi,q1,Pi11,phi,c_param
//   root/<preset>/<label>/histogram_tNNNN.NNN.csv   m,f,f_mj
//   root/<preset>/<label>/histogram_final_avg.csv   m,f,f_mj averaged over the final window
//   root/<preset>/<label>/manifest.json    config, seed, wall times, files, summary
// Tabulation presets (fig1, fig2) write a single CSV next to the manifest.

#include "opdyn/config.hpp"
#include "opdyn/diagnostics.hpp"

#include "json.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace opdyn::scenario {

inline constexpr const char* kVersion = "1.0.0";

struct NamedRun {
  std::string label;
  RunSpec spec;
};

struct Preset {
  std::string name;
  std::string description;
  std::vector<NamedRun> runs;  ///< empty for tabulation presets
  bool tabulation = false;
};

[[nodiscard]] std::vector<std::string> preset_names();

/// Throws ConfigError for an unknown name.
[[nodiscard]] Preset make_preset(const std::string& name);

struct RunOptions {
  std::optional<std::uint64_t> seed;         ///< master seed override
  std::optional<std::uint64_t> n_particles;  ///< particle-count override
  std::optional<double> t_end;               ///< horizon override
  std::vector<std::string> only;             ///< run labels to keep; empty keeps all
  bool parallel = false;                     ///< run a preset's configurations concurrently
  bool quiet = true;
};

/// Applies overrides. Multi-run presets give run k the seed derive_seed(master, k)
/// so results do not depend on the parallel toggle.
void apply_options(Preset& preset, const RunOptions& opt);

struct ConvergedStats {
  double t_from = 0.0;
  double chi = 0.0;
  double mbar = 0.0;
  double phi = 0.0;
  double chi_sd = 0.0;
  double mbar_sd = 0.0;
  double phi_sd = 0.0;
  std::size_t samples = 0;
  bool stationary = false;
};

/// Means over rows with t >= (1 - fraction) t_last. Stationary when the two
/// halves of the window agree: chi and phi to 5 % relative, mbar to 0.02.
[[nodiscard]] ConvergedStats converged_stats(const std::vector<FlowState>& rows, double fraction);

struct RunResult {
  nlohmann::json manifest;
  std::vector<FlowState> series;
  HistogramPair final_average;  ///< time-averaged over the final window
  bool ok = true;
};

/// Runs one configuration into dir. A SimulationError is caught, the partial
/// timeseries and a manifest with a failure record are written, and ok is false.
/// Throws std::runtime_error naming the path on I/O failure.
RunResult run_single(const RunSpec& spec, const std::filesystem::path& dir, const std::string& preset,
                     const std::string& label, bool quiet = true);

/// Runs every configuration of a preset (or the tabulation) under root/<name>.
/// Returns the preset manifest; its "ok" is false if any run failed.
nlohmann::json run_preset(const Preset& preset, const std::filesystem::path& root, const RunOptions& opt);

/// Re-runs the configuration stored in a run manifest into dir.
RunResult rerun_manifest(const std::filesystem::path& manifest, const std::filesystem::path& dir);

[[nodiscard]] std::vector<std::string> figure_ids();

/// Presets whose runs a figure needs.
[[nodiscard]] std::vector<std::string> figure_requirements(const std::string& fig);

/// Writes dest/<fig>.csv from runs under root. Throws ConfigError for an
/// unknown id and std::runtime_error listing the missing presets.
std::filesystem::path emit_plotdata(const std::filesystem::path& root, const std::string& fig,
                                    const std::filesystem::path& dest);

/// CSV helpers shared with the tools.
void write_timeseries(const std::filesystem::path& path, const std::vector<FlowState>& rows);
[[nodiscard]] std::vector<FlowState> read_timeseries(const std::filesystem::path& path);
void write_histogram(const std::filesystem::path& path, const HistogramPair& h);

}  // namespace opdyn::scenario

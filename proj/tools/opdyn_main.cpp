// Command-line front end: runs presets or configuration files and emits
// plot data.

#include "opdyn/config.hpp"
#include "opdyn/scenario.hpp"

#include "CLI11.hpp"

#include <iostream>

namespace fs = std::filesystem;
using namespace opdyn;

int main(int argc, char** argv) {
  CLI::App app{"Relativistic kinetic opinion dynamics: particle runs and equilibrium theory"};
  app.require_subcommand(1);

  auto* run_cmd = app.add_subcommand("run", "run a preset, a configuration file or a stored manifest");
  std::string preset, config, manifest;
  fs::path out = "results";
  scenario::RunOptions opt;
  std::uint64_t seed = 0, particles = 0;
  double t_end = 0.0;
  std::string mode = "deterministic";
  bool verbose = false;
  auto* g = run_cmd->add_option_group("source");
  g->add_option("--preset,-p", preset, "preset name (see 'list')");
  g->add_option("--config,-c", config, "JSON configuration file")->check(CLI::ExistingFile);
  g->add_option("--manifest", manifest, "re-run the configuration recorded in a run manifest")->check(CLI::ExistingFile);
  g->require_option(1);
  run_cmd->add_option("--out,-o", out, "output root directory")->capture_default_str();
  auto* seed_opt = run_cmd->add_option("--seed", seed, "master seed override");
  auto* part_opt = run_cmd->add_option("--particles,-n", particles, "particle-count override")->check(CLI::PositiveNumber);
  auto* tend_opt = run_cmd->add_option("--t-end", t_end, "horizon override")->check(CLI::PositiveNumber);
  run_cmd->add_option("--only", opt.only, "run labels of the preset to keep");
  run_cmd->add_option("--mode", mode, "deterministic (sequential) or parallel")
      ->check(CLI::IsMember({"deterministic", "parallel"}))
      ->capture_default_str();
  run_cmd->add_flag("--verbose,-v", verbose, "progress on stderr");

  auto* plot_cmd = app.add_subcommand("plot", "write plot data for a figure from completed runs");
  std::string fig;
  fs::path root = "results", dest;
  plot_cmd->add_option("--fig,-f", fig, "figure id (see 'list')")->required();
  plot_cmd->add_option("--root,-r", root, "root directory holding preset runs")->capture_default_str();
  plot_cmd->add_option("--dest,-d", dest, "output directory (default <root>/plotdata)");

  app.add_subcommand("list", "list presets and figure ids");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand("list")) {
      std::cout << "presets:\n";
      for (const auto& n : scenario::preset_names()) std::cout << "  " << n << "  " << scenario::make_preset(n).description << '\n';
      std::cout << "figures:\n";
      for (const auto& id : scenario::figure_ids()) {
        std::cout << "  " << id << "  needs";
        for (const auto& p : scenario::figure_requirements(id)) std::cout << ' ' << p;
        std::cout << '\n';
      }
      return 0;
    }
    if (app.got_subcommand("plot")) {
      if (dest.empty()) dest = root / "plotdata";
      std::cout << scenario::emit_plotdata(root, fig, dest).string() << '\n';
      return 0;
    }
    if (*seed_opt) opt.seed = seed;
    if (*part_opt) opt.n_particles = particles;
    if (*tend_opt) opt.t_end = t_end;
    opt.parallel = mode == "parallel";
    opt.quiet = !verbose;
    bool ok = true;
    if (!preset.empty()) {
      scenario::Preset p = scenario::make_preset(preset);
      scenario::apply_options(p, opt);
      const auto m = scenario::run_preset(p, out, opt);
      ok = m.at("ok").get<bool>();
      std::cout << (out / preset / "manifest.json").string() << '\n';
    } else {
      RunSpec spec;
      std::string label;
      if (!config.empty()) {
        spec = load_config(config);
        label = fs::path(config).stem().string();
      } else {
        const auto res = scenario::rerun_manifest(manifest, out / "rerun");
        std::cout << (out / "rerun" / "manifest.json").string() << '\n';
        return res.ok ? 0 : 1;
      }
      if (opt.seed) spec.sim.seed = *opt.seed;
      if (opt.n_particles) spec.sim.n_particles = *opt.n_particles;
      if (opt.t_end) spec.sim.t_end = *opt.t_end;
      spec.validate();
      const auto res = scenario::run_single(spec, out / label, "config", label, opt.quiet);
      ok = res.ok;
      std::cout << (out / label / "manifest.json").string() << '\n';
    }
    if (!ok) {
      std::cerr << "run failed; see the failure record in the manifest\n";
      return 1;
    }
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

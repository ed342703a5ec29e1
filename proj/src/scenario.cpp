#include "opdyn/scenario.hpp"

#include "opdyn/random.hpp"
#include "opdyn/theory.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <exception>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

namespace opdyn::scenario {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kDigits = std::numeric_limits<double>::max_digits10;

InitialCondition ranges(std::initializer_list<InitRange> rs) {
  InitialCondition init;
  init.ranges.assign(rs.begin(), rs.end());
  return init;
}

RunSpec make_spec(double lambda, double delta_amp, double b_rate, double m_party, double t_end,
                  InitialCondition init) {
  RunSpec s;
  s.sim.lambda = lambda;
  s.sim.delta_amp = delta_amp;
  s.sim.b_rate = b_rate;
  s.sim.m_party = m_party;
  s.sim.t_end = t_end;
  s.sim.init = std::move(init);
  return s;
}

std::string number_label(double x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

std::string iso_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << std::setprecision(kDigits);
  return os;
}

void close_out(std::ofstream& os, const fs::path& path) {
  os.close();
  if (!os) throw std::runtime_error("write failed: " + path.string());
}

void make_dirs(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create directory " + dir.string() + ": " + ec.message());
}

void write_json(const fs::path& path, const json& j) {
  auto os = open_out(path);
  os << j.dump(2) << '\n';
  close_out(os, path);
}

json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
}

json flow_json(const FlowState& f) {
  return {{"t", f.t},   {"n", f.n},       {"mbar", f.mbar}, {"chi", f.chi},   {"theta", f.theta},
          {"Pi", f.pi_dyn}, {"q1", f.q1}, {"Pi11", f.pi11}, {"phi", f.phi}, {"c_param", f.c_param},
          {"cold", f.cold}};
}

std::string histogram_name(double t) {
  std::ostringstream os;
  os << "histogram_t" << std::fixed << std::setprecision(3) << std::setw(8) << std::setfill('0') << t << ".csv";
  return os.str();
}

/// Running sums of histograms sharing a bin layout.
struct HistogramAverage {
  HistogramPair sum;
  int count = 0;

  void add(const HistogramPair& h) {
    if (count == 0) {
      sum = h;
    } else {
      for (std::size_t k = 0; k < h.f.size(); ++k) {
        sum.f[k] += h.f[k];
        sum.f_mj[k] += h.f_mj[k];
        sum.counts[k] += h.counts[k];
        sum.expected[k] += h.expected[k];
      }
      sum.flow = h.flow;
    }
    ++count;
  }

  [[nodiscard]] HistogramPair mean() const {
    HistogramPair h = sum;
    if (count > 1) {
      for (std::size_t k = 0; k < h.f.size(); ++k) {
        h.f[k] /= count;
        h.f_mj[k] /= count;
      }
    }
    return h;
  }
};

void tabulate_fig1(const fs::path& dir, json& manifest) {
  std::vector<double> chis = theory::log_space(1e-3, 1e3, 241);
  const theory::Peak peak = theory::find_peak(theory::psi1_zero, 0.1, 100.0);
  chis.push_back(peak.x);
  std::sort(chis.begin(), chis.end());
  const std::vector<double> cs = {0.0, 0.5, 1.0, 2.0};
  const fs::path path = dir / "psi1.csv";
  auto os = open_out(path);
  theory::write_psi1_table(os, chis, cs);
  close_out(os, path);
  manifest["files"] = {"psi1.csv"};
  manifest["summary"] = {{"peak_chi", peak.x}, {"peak_psi1", peak.value}};
}

void tabulate_fig2(const fs::path& dir, json& manifest) {
  const std::vector<double> chis = theory::log_space(1e-3, 1e3, 241);
  const std::vector<double> ps = {0.0, 0.5, 1.0, 2.0, 3.0, 5.0};
  const fs::path path = dir / "psi2.csv";
  auto os = open_out(path);
  theory::write_psi2_table(os, chis, ps);
  close_out(os, path);
  json peaks = json::array();
  for (double p : ps) {
    const theory::Peak pk = theory::find_peak([p](double c) { return theory::psi2(c, p); }, 1e-2, 1e3);
    peaks.push_back({{"P", p}, {"chi", pk.x}, {"psi2", pk.value}});
  }
  manifest["files"] = {"psi2.csv"};
  manifest["summary"] = {{"max_on_grid", peaks}};
}

}  // namespace

std::vector<std::string> preset_names() {
  return {"a1", "a2", "a3", "a4", "b1", "b2", "c1", "c2", "d-grid", "fig1", "fig2", "fig7"};
}

Preset make_preset(const std::string& name) {
  Preset p;
  p.name = name;
  const auto pos_099 = InitRange{0.99, 1.0, 1.0};
  if (name == "a1") {
    p.description = "inelastic cooling, L=0, 0.99 <= |m| < 1";
    p.runs.push_back({"run", make_spec(0.0, 0.0, 0.0, 0.0, 17.7, ranges({pos_099, {-1.0, -0.99, 1.0}}))});
  } else if (name == "a2") {
    p.description = "inelastic cooling, L=0, 0.99 <= m < 1 and -1 < m <= -0.9";
    p.runs.push_back({"run", make_spec(0.0, 0.0, 0.0, 0.0, 177.0, ranges({pos_099, {-1.0, -0.9, 1.0}}))});
  } else if (name == "a3") {
    p.description = "party drift, L=1, B=0.1, m_p=0, 0.99 <= |m| < 1";
    p.runs.push_back({"run", make_spec(1.0, 0.0, 0.1, 0.0, 100.0, ranges({pos_099, {-1.0, -0.99, 1.0}}))});
  } else if (name == "a4") {
    p.description = "party drift, L=1, B=0.1, m_p=0.97, 0.99 <= m < 1 and -1 < m <= -0.8";
    p.runs.push_back({"run", make_spec(1.0, 0.0, 0.1, 0.97, 100.0, ranges({pos_099, {-1.0, -0.8, 1.0}}))});
  } else if (name == "b1" || name == "b2") {
    const InitialCondition init =
        name == "b1" ? ranges({{-1.0, 1.0, 1.0}}) : ranges({pos_099, {-1.0, -0.8, 1.0}});
    p.description = "self-thinking with elastic exchange, L=1, B=0, Da in {1, 5}";
    for (double da : {1.0, 5.0}) p.runs.push_back({"da" + number_label(da), make_spec(1.0, da, 0.0, 0.0, 177.0, init)});
  } else if (name == "c1") {
    p.description = "compromise and self-thinking, L=0, B=0, 0.8 <= |m| < 1";
    for (double da : {1.0, 5.0, 11.5, 25.0}) {
      p.runs.push_back({"da" + number_label(da),
                        make_spec(0.0, da, 0.0, 0.0, 50.0, ranges({{0.8, 1.0, 1.0}, {-1.0, -0.8, 1.0}}))});
    }
  } else if (name == "c2") {
    p.description = "compromise and self-thinking, L=0, B=0, 0.99 <= m < 1 and -1 < m <= -0.8";
    for (double da : {1.0, 11.5}) {
      p.runs.push_back({"da" + number_label(da), make_spec(0.0, da, 0.0, 0.0, 4000.0, ranges({pos_099, {-1.0, -0.8, 1.0}}))});
    }
  } else if (name == "d-grid") {
    p.description = "compromise, self-thinking and party drift, L=0, 0.8 <= |m| < 1";
    for (auto [da, b] : {std::pair{1.0, 0.1}, std::pair{11.5, 1.0}}) {
      for (double mp : {0.0, 0.5, 0.8}) {
        p.runs.push_back({"mp" + number_label(mp) + "_da" + number_label(da) + "_b" + number_label(b),
                          make_spec(0.0, da, b, mp, 100.0, ranges({{0.8, 1.0, 1.0}, {-1.0, -0.8, 1.0}}))});
      }
    }
  } else if (name == "fig7") {
    p.description = "cooling laws: a1 to t=30 and a3";
    p.runs.push_back({"a1", make_spec(0.0, 0.0, 0.0, 0.0, 30.0, ranges({pos_099, {-1.0, -0.99, 1.0}}))});
    p.runs.push_back({"a3", make_spec(1.0, 0.0, 0.1, 0.0, 100.0, ranges({pos_099, {-1.0, -0.99, 1.0}}))});
  } else if (name == "fig1") {
    p.description = "psi1(chi, C) table";
    p.tabulation = true;
  } else if (name == "fig2") {
    p.description = "psi2(chi, P) table";
    p.tabulation = true;
  } else {
    std::string known;
    for (const auto& n : preset_names()) known += (known.empty() ? "" : ", ") + n;
    throw ConfigError("unknown preset '" + name + "'; known presets: " + known);
  }
  for (auto& r : p.runs) r.spec.histogram_every = static_cast<std::uint64_t>(std::llround(r.spec.sim.t_end / r.spec.sim.dt / 10.0));
  return p;
}

void apply_options(Preset& preset, const RunOptions& opt) {
  if (!opt.only.empty()) {
    for (const auto& want : opt.only) {
      const bool found = std::any_of(preset.runs.begin(), preset.runs.end(), [&](const NamedRun& r) { return r.label == want; });
      if (!found) throw ConfigError("preset " + preset.name + " has no run labelled '" + want + "'");
    }
    std::erase_if(preset.runs, [&](const NamedRun& r) {
      return std::find(opt.only.begin(), opt.only.end(), r.label) == opt.only.end();
    });
  }
  const bool multi = make_preset(preset.name).runs.size() > 1;
  const auto all = make_preset(preset.name).runs;
  for (auto& r : preset.runs) {
    if (opt.n_particles) r.spec.sim.n_particles = *opt.n_particles;
    if (opt.t_end) {
      r.spec.sim.t_end = *opt.t_end;
      r.spec.histogram_every = static_cast<std::uint64_t>(std::llround(*opt.t_end / r.spec.sim.dt / 10.0));
    }
    const std::uint64_t master = opt.seed.value_or(r.spec.sim.seed);
    if (multi) {
      const auto k = static_cast<std::uint64_t>(
          std::find_if(all.begin(), all.end(), [&](const NamedRun& a) { return a.label == r.label; }) - all.begin());
      r.spec.sim.seed = derive_seed(master, k);
    } else {
      r.spec.sim.seed = master;
    }
    if (r.spec.histogram_every == 0) r.spec.histogram_every = 1;
    r.spec.validate();
  }
}

ConvergedStats converged_stats(const std::vector<FlowState>& rows, double fraction) {
  ConvergedStats s;
  if (rows.empty()) return s;
  const double t_last = rows.back().t;
  s.t_from = (1.0 - fraction) * t_last;
  std::vector<const FlowState*> w;
  for (const auto& r : rows)
    if (r.t >= s.t_from) w.push_back(&r);
  s.samples = w.size();
  auto mean_sd = [&](auto get, std::size_t lo, std::size_t hi, double* sd) {
    double m = 0.0;
    for (std::size_t i = lo; i < hi; ++i) m += get(*w[i]);
    m /= static_cast<double>(hi - lo);
    if (sd) {
      double v = 0.0;
      for (std::size_t i = lo; i < hi; ++i) v += (get(*w[i]) - m) * (get(*w[i]) - m);
      *sd = hi - lo > 1 ? std::sqrt(v / static_cast<double>(hi - lo - 1)) : 0.0;
    }
    return m;
  };
  auto chi = [](const FlowState& f) { return f.chi; };
  auto mbar = [](const FlowState& f) { return f.mbar; };
  auto phi = [](const FlowState& f) { return f.phi; };
  const std::size_t n = w.size();
  s.chi = mean_sd(chi, 0, n, &s.chi_sd);
  s.mbar = mean_sd(mbar, 0, n, &s.mbar_sd);
  s.phi = mean_sd(phi, 0, n, &s.phi_sd);
  if (n >= 4) {
    const std::size_t h = n / 2;
    const double c1 = mean_sd(chi, 0, h, nullptr), c2 = mean_sd(chi, h, n, nullptr);
    const double p1 = mean_sd(phi, 0, h, nullptr), p2 = mean_sd(phi, h, n, nullptr);
    const double m1 = mean_sd(mbar, 0, h, nullptr), m2 = mean_sd(mbar, h, n, nullptr);
    s.stationary = std::abs(c1 - c2) <= 0.05 * std::abs(s.chi) && std::abs(p1 - p2) <= 0.05 * std::abs(s.phi) &&
                   std::abs(m1 - m2) <= 0.02;
  }
  return s;
}

void write_timeseries(const fs::path& path, const std::vector<FlowState>& rows) {
  auto os = open_out(path);
  os << "t,n,mbar,chi,theta,Pi,q1,Pi11,phi,c_param\n";
  for (const auto& f : rows) {
    os << f.t << ',' << f.n << ',' << f.mbar << ',' << f.chi << ',' << f.theta << ',' << f.pi_dyn << ',' << f.q1
       << ',' << f.pi11 << ',' << f.phi << ',' << f.c_param << '\n';
  }
  close_out(os, path);
}

std::vector<FlowState> read_timeseries(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::string line;
  std::getline(in, line);
  if (line != "t,n,mbar,chi,theta,Pi,q1,Pi11,phi,c_param") throw std::runtime_error(path.string() + ": unexpected header");
  std::vector<FlowState> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream is(line);
    FlowState f;
    if (!(is >> f.t >> f.n >> f.mbar >> f.chi >> f.theta >> f.pi_dyn >> f.q1 >> f.pi11 >> f.phi >> f.c_param)) {
      throw std::runtime_error(path.string() + ": malformed row '" + line + "'");
    }
    rows.push_back(f);
  }
  return rows;
}

void write_histogram(const fs::path& path, const HistogramPair& h) {
  auto os = open_out(path);
  os << "m,f,f_mj\n";
  for (std::size_t k = 0; k < h.centers.size(); ++k) os << h.centers[k] << ',' << h.f[k] << ',' << h.f_mj[k] << '\n';
  close_out(os, path);
}

RunResult run_single(const RunSpec& spec, const fs::path& dir, const std::string& preset, const std::string& label,
                     bool quiet) {
  spec.validate();
  make_dirs(dir);
  RunResult res;
  json& man = res.manifest;
  man["preset"] = preset;
  man["label"] = label;
  man["version"] = kVersion;
  man["seed"] = spec.sim.seed;
  man["config"] = to_json(spec);
  man["started"] = iso_now();
  const auto t0 = std::chrono::steady_clock::now();

  const double window_start = (1.0 - spec.average_fraction) * spec.sim.t_end;
  std::vector<std::string> files = {"timeseries.csv"};
  HistogramAverage avg;
  RunSummary summary;
  std::uint64_t next_snap = 0;
  try {
    summary = run(spec.sim, [&](const EnsembleState& s) {
      const FlowState f = measure(s);
      res.series.push_back(f);
      const bool last = s.time >= spec.sim.t_end;
      const bool snap = s.step >= next_snap || last;
      if (snap) next_snap = s.step + spec.histogram_every;
      const bool in_window = s.time >= window_start - 1e-9;
      if (snap || in_window) {
        const HistogramPair h = histogram_vs_mj(s.p, spec.bins);
        if (snap) {
          const std::string name = histogram_name(s.time);
          write_histogram(dir / name, h);
          files.push_back(name);
        }
        if (in_window) avg.add(h);
      }
      if (!quiet && (s.step % (spec.sim.output_every * 50) == 0 || last)) {
        std::cerr << preset << '/' << label << " t=" << s.time << " chi=" << f.chi << " mbar=" << f.mbar << '\n';
      }
    });
    man["status"] = "ok";
  } catch (const SimulationError& e) {
    res.ok = false;
    man["status"] = "failed";
    man["failure"] = {{"message", e.what()}, {"t_last_output", res.series.empty() ? 0.0 : res.series.back().t}};
  }
  write_timeseries(dir / "timeseries.csv", res.series);
  if (avg.count > 0) {
    res.final_average = avg.mean();
    write_histogram(dir / "histogram_final_avg.csv", res.final_average);
    files.push_back("histogram_final_avg.csv");
  }
  man["finished"] = iso_now();
  man["wall_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  man["files"] = files;
  if (res.ok) {
    man["summary"] = {{"steps", summary.steps},
                      {"candidates", summary.candidates},
                      {"collisions", summary.collisions},
                      {"acceptance", summary.candidates ? static_cast<double>(summary.collisions) /
                                                              static_cast<double>(summary.candidates)
                                                        : 0.0},
                      {"max_g", summary.max_g},
                      {"t_final", summary.t_final}};
  }
  if (!res.series.empty()) {
    man["final"] = flow_json(res.series.back());
    const ConvergedStats c = converged_stats(res.series, spec.average_fraction);
    man["converged"] = {{"t_from", c.t_from}, {"chi", c.chi},         {"chi_sd", c.chi_sd},
                        {"mbar", c.mbar},     {"mbar_sd", c.mbar_sd}, {"phi", c.phi},
                        {"phi_sd", c.phi_sd}, {"samples", c.samples}, {"stationary", c.stationary}};
    if (avg.count > 0) {
      const auto it = std::max_element(res.final_average.f.begin(), res.final_average.f.end());
      man["converged"]["histogram_peak"] = {
          {"m", res.final_average.centers[static_cast<std::size_t>(it - res.final_average.f.begin())]},
          {"f", *it},
          {"snapshots", avg.count}};
    }
  }
  write_json(dir / "manifest.json", man);
  return res;
}

json run_preset(const Preset& preset, const fs::path& root, const RunOptions& opt) {
  const fs::path dir = root / preset.name;
  make_dirs(dir);
  json man;
  man["preset"] = preset.name;
  man["description"] = preset.description;
  man["version"] = kVersion;
  man["started"] = iso_now();
  man["ok"] = true;
  if (preset.tabulation) {
    if (preset.name == "fig1") tabulate_fig1(dir, man);
    else tabulate_fig2(dir, man);
    man["runs"] = json::array();
  } else {
    std::vector<json> runs(preset.runs.size());
    std::vector<std::exception_ptr> errors(preset.runs.size());
    auto work = [&](std::size_t k) {
      try {
        const auto& r = preset.runs[k];
        const RunResult res = run_single(r.spec, dir / r.label, preset.name, r.label, opt.quiet);
        runs[k] = {{"label", r.label}, {"dir", r.label}, {"status", res.manifest["status"]}};
      } catch (...) {
        errors[k] = std::current_exception();
      }
    };
    if (opt.parallel && preset.runs.size() > 1) {
      std::vector<std::thread> pool;
      for (std::size_t k = 0; k < preset.runs.size(); ++k) pool.emplace_back(work, k);
      for (auto& t : pool) t.join();
    } else {
      for (std::size_t k = 0; k < preset.runs.size(); ++k) work(k);
    }
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
    man["runs"] = runs;
    for (const auto& r : runs)
      if (r["status"] != "ok") man["ok"] = false;
  }
  man["parallel"] = opt.parallel;
  man["finished"] = iso_now();
  write_json(dir / "manifest.json", man);
  return man;
}

RunResult rerun_manifest(const fs::path& manifest, const fs::path& dir) {
  const json m = read_json(manifest);
  if (!m.contains("config")) throw ConfigError(manifest.string() + ": not a run manifest (no 'config')");
  const RunSpec spec = parse_config(m.at("config"));
  return run_single(spec, dir, m.value("preset", std::string("config")), m.value("label", std::string("run")));
}

// ---------------------------------------------------------------------------
// Plot data

namespace {

struct RunRef {
  std::string preset;
  std::string label;
  fs::path dir;
  json manifest;
};

std::vector<RunRef> preset_runs(const fs::path& root, const std::string& preset) {
  const fs::path man = root / preset / "manifest.json";
  if (!fs::exists(man)) return {};
  const json j = read_json(man);
  std::vector<RunRef> out;
  for (const auto& r : j.at("runs")) {
    RunRef ref{preset, r.at("label").get<std::string>(), root / preset / r.at("dir").get<std::string>(), {}};
    ref.manifest = read_json(ref.dir / "manifest.json");
    out.push_back(std::move(ref));
  }
  return out;
}

std::string run_id(const RunRef& r) { return r.label == "run" ? r.preset : r.preset + ":" + r.label; }

struct FigureDef {
  std::vector<std::string> presets;
  enum class Kind { series, snapshots, final_snapshot, final_average, table, fig7_left, fig7_right } kind;
  std::vector<std::string> columns;   ///< series columns after t
  std::vector<std::string> labels;    ///< keep only these labels; empty keeps all
};

const std::map<std::string, FigureDef>& figures() {
  using K = FigureDef::Kind;
  static const std::map<std::string, FigureDef> defs = {
      {"fig1", {{"fig1"}, K::table, {}, {}}},
      {"fig2", {{"fig2"}, K::table, {}, {}}},
      {"fig3", {{"a1", "a2"}, K::series, {"chi"}, {}}},
      {"fig4", {{"a1", "a2"}, K::final_snapshot, {}, {}}},
      {"fig5", {{"a3", "a4"}, K::series, {"chi"}, {}}},
      {"fig6", {{"a3", "a4"}, K::snapshots, {}, {}}},
      {"fig7-left", {{"fig7"}, K::fig7_left, {}, {}}},
      {"fig7-right", {{"fig7"}, K::fig7_right, {}, {}}},
      {"fig8", {{"a1", "a2", "a3", "a4"}, K::series, {"mbar"}, {}}},
      {"fig9", {{"a1", "a2"}, K::series, {"Pi", "q1", "Pi11", "c_param"}, {}}},
      {"fig10", {{"b1", "b2"}, K::series, {"chi"}, {}}},
      {"fig11", {{"b1", "b2"}, K::series, {"mbar"}, {}}},
      {"fig12", {{"b1", "b2"}, K::snapshots, {}, {"da1"}}},
      {"fig13", {{"c1"}, K::snapshots, {}, {}}},
      {"fig14", {{"c1"}, K::series, {"chi", "phi"}, {}}},
      {"fig15", {{"c1"}, K::final_average, {}, {}}},
      {"fig16", {{"c2"}, K::series, {"chi", "mbar", "phi"}, {}}},
      {"fig17", {{"c2"}, K::final_average, {}, {"da11.5"}}},
      {"fig18", {{"d-grid"}, K::final_average, {}, {}}},
      {"fig19", {{"d-grid", "c1"}, K::series, {"chi", "phi"}, {}}},
  };
  return defs;
}

double column(const FlowState& f, const std::string& c) {
  if (c == "chi") return f.chi;
  if (c == "mbar") return f.mbar;
  if (c == "phi") return f.phi;
  if (c == "Pi") return f.pi_dyn;
  if (c == "q1") return f.q1;
  if (c == "Pi11") return f.pi11;
  if (c == "c_param") return f.c_param;
  throw std::logic_error("unknown column " + c);
}

void copy_histogram_rows(std::ostream& os, const fs::path& path, const std::string& prefix) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line))
    if (!line.empty()) os << prefix << line << '\n';
}

std::vector<std::pair<double, std::string>> snapshot_files(const RunRef& r) {
  std::vector<std::pair<double, std::string>> out;
  for (const auto& f : r.manifest.at("files")) {
    const auto name = f.get<std::string>();
    if (name.rfind("histogram_t", 0) != 0) continue;
    out.emplace_back(std::stod(name.substr(11, name.size() - 15)), name);
  }
  std::sort(out.begin(), out.end());
  return out;
}

double chi_at(const std::vector<FlowState>& rows, double t) {
  const auto it = std::min_element(rows.begin(), rows.end(),
                                   [t](const FlowState& a, const FlowState& b) { return std::abs(a.t - t) < std::abs(b.t - t); });
  return it->chi;
}

}  // namespace

std::vector<std::string> figure_ids() {
  std::vector<std::string> ids;
  for (const auto& [k, _] : figures()) ids.push_back(k);
  return ids;
}

std::vector<std::string> figure_requirements(const std::string& fig) {
  const auto it = figures().find(fig);
  if (it == figures().end()) {
    std::string known;
    for (const auto& id : figure_ids()) known += (known.empty() ? "" : ", ") + id;
    throw ConfigError("unknown figure id '" + fig + "'; known ids: " + known);
  }
  return it->second.presets;
}

fs::path emit_plotdata(const fs::path& root, const std::string& fig, const fs::path& dest) {
  const auto required = figure_requirements(fig);
  const FigureDef& def = figures().at(fig);
  std::vector<RunRef> runs;
  std::string missing;
  for (const auto& p : required) {
    if (!fs::exists(root / p / "manifest.json")) {
      missing += (missing.empty() ? "" : ", ") + p;
      continue;
    }
    for (auto& r : preset_runs(root, p)) {
      if (def.labels.empty() || std::find(def.labels.begin(), def.labels.end(), r.label) != def.labels.end()) {
        runs.push_back(std::move(r));
      }
    }
  }
  if (!missing.empty()) {
    throw std::runtime_error(fig + " needs runs of presets: " + missing + " (run them with --out " + root.string() + ")");
  }
  make_dirs(dest);
  const fs::path out_path = dest / (fig + ".csv");
  auto os = open_out(out_path);
  using K = FigureDef::Kind;
  switch (def.kind) {
    case K::table: {
      const fs::path src = root / required.front() / (fig == "fig1" ? "psi1.csv" : "psi2.csv");
      std::ifstream in(src);
      if (!in) throw std::runtime_error("cannot read " + src.string());
      os << in.rdbuf();
      break;
    }
    case K::series: {
      os << "run,t";
      for (const auto& c : def.columns) os << ',' << c;
      os << '\n';
      for (const auto& r : runs) {
        for (const auto& f : read_timeseries(r.dir / "timeseries.csv")) {
          os << run_id(r) << ',' << f.t;
          for (const auto& c : def.columns) os << ',' << column(f, c);
          os << '\n';
        }
      }
      break;
    }
    case K::snapshots:
    case K::final_snapshot: {
      os << "run,t,m,f,f_mj\n";
      for (const auto& r : runs) {
        auto snaps = snapshot_files(r);
        if (def.kind == K::final_snapshot && !snaps.empty()) snaps.erase(snaps.begin(), snaps.end() - 1);
        for (const auto& [t, name] : snaps) {
          std::ostringstream prefix;
          prefix << std::setprecision(kDigits) << run_id(r) << ',' << t << ',';
          copy_histogram_rows(os, r.dir / name, prefix.str());
        }
      }
      break;
    }
    case K::final_average: {
      os << "run,m,f,f_mj\n";
      for (const auto& r : runs) copy_histogram_rows(os, r.dir / "histogram_final_avg.csv", run_id(r) + ",");
      break;
    }
    case K::fig7_left:
    case K::fig7_right: {
      const bool left = def.kind == K::fig7_left;
      const std::string want = left ? "a1" : "a3";
      const auto it = std::find_if(runs.begin(), runs.end(), [&](const RunRef& r) { return r.label == want; });
      if (it == runs.end()) throw std::runtime_error(fig + ": fig7 preset has no run " + want);
      const auto rows = read_timeseries(it->dir / "timeseries.csv");
      const double rate = left ? it->manifest["config"].value("a_rate", 1.0) : it->manifest["config"].value("b_rate", 0.1);
      const double t_anchor = left ? 15.0 : 40.0;
      const double chi0 = rows.front().chi;
      const double chi_a = chi_at(rows, t_anchor);
      using theory::CoolingRegime;
      const theory::CoolingCurve small{chi0, rate, left ? CoolingRegime::small_chi_collision : CoolingRegime::small_chi_vlasov};
      const theory::CoolingCurve large{chi_a, rate, left ? CoolingRegime::large_chi_collision : CoolingRegime::large_chi_vlasov};
      os << (left ? "t,chi_dsmc,eq41,eq42\n" : "t,chi_dsmc,eq43,eq44\n");
      for (const auto& f : rows) {
        const double dt = f.t - t_anchor;
        double late = 0.0;
        if (dt >= 0.0) {
          late = theory::chi_limit(large, dt);
        } else if (left) {
          // backward extension; the square-root law has no meaning once its root turns negative
          const double root = rate * dt / std::sqrt(M_PI) + std::sqrt(chi_a);
          late = root > 0.0 ? root * root : std::numeric_limits<double>::quiet_NaN();
        } else {
          late = chi_a * std::exp(2.0 * rate * dt);
        }
        os << f.t << ',' << f.chi << ',' << theory::chi_limit(small, f.t) << ',' << late;
        os << '\n';
      }
      break;
    }
  }
  close_out(os, out_path);
  return out_path;
}

}  // namespace opdyn::scenario

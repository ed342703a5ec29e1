#include "opdyn/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace opdyn {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& field, const std::string& what) {
  throw ConfigError("config field '" + field + "': " + what);
}

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& [key, _] : j.items()) {
    if (!allowed.count(key)) fail(where.empty() ? key : where + "." + key, "unknown key");
  }
}

double get_number(const json& j, const std::string& key, const std::string& path) {
  const json& v = j.at(key);
  if (!v.is_number()) fail(path, "must be a number");
  return v.get<double>();
}

std::uint64_t get_count(const json& j, const std::string& key, const std::string& path) {
  const json& v = j.at(key);
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer()) {
    if (v.get<std::int64_t>() < 0) fail(path, "must be non-negative");
    return static_cast<std::uint64_t>(v.get<std::int64_t>());
  }
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (d >= 0.0 && d == std::floor(d) && d < 1.8e19) return static_cast<std::uint64_t>(d);
  }
  fail(path, "must be a non-negative integer");
}

InitialCondition parse_init(const json& j) {
  if (!j.is_object()) fail("init", "must be an object");
  reject_unknown(j, {"ranges", "equilibrium"}, "init");
  InitialCondition init;
  if (j.contains("ranges") == j.contains("equilibrium")) {
    fail("init", "give exactly one of 'ranges' or 'equilibrium'");
  }
  if (j.contains("equilibrium")) {
    const json& e = j.at("equilibrium");
    if (!e.is_object()) fail("init.equilibrium", "must be an object");
    reject_unknown(e, {"chi0", "mbar0"}, "init.equilibrium");
    if (!e.contains("chi0")) fail("init.equilibrium.chi0", "missing");
    init.kind = InitialCondition::Kind::equilibrium;
    init.chi0 = get_number(e, "chi0", "init.equilibrium.chi0");
    if (e.contains("mbar0")) init.mbar0 = get_number(e, "mbar0", "init.equilibrium.mbar0");
    return init;
  }
  const json& rs = j.at("ranges");
  if (!rs.is_array()) fail("init.ranges", "must be an array");
  for (std::size_t i = 0; i < rs.size(); ++i) {
    const std::string path = "init.ranges[" + std::to_string(i) + "]";
    const json& r = rs[i];
    if (!r.is_object()) fail(path, "must be an object with lo, hi and optional weight");
    reject_unknown(r, {"lo", "hi", "weight"}, path);
    if (!r.contains("lo")) fail(path + ".lo", "missing");
    if (!r.contains("hi")) fail(path + ".hi", "missing");
    InitRange range;
    range.lo = get_number(r, "lo", path + ".lo");
    range.hi = get_number(r, "hi", path + ".hi");
    if (r.contains("weight")) range.weight = get_number(r, "weight", path + ".weight");
    init.ranges.push_back(range);
  }
  return init;
}

}  // namespace

const char* kernel_name(Kernel k) { return k == Kernel::inline_flux ? "inline_flux" : "invariant_flux"; }

void RunSpec::validate() const {
  sim.validate();
  if (bins < 10) fail("bins", "must be at least 10");
  if (!(average_fraction > 0.0 && average_fraction <= 1.0)) fail("average_fraction", "must lie in (0, 1]");
}

RunSpec parse_config(const json& j) {
  if (!j.is_object()) throw ConfigError("config: top level must be a JSON object");
  static const std::set<std::string> allowed = {
      "lambda", "delta_amp", "a_rate", "b_rate", "m_party", "n_particles", "dt", "t_end", "seed",
      "init", "output_every", "kernel", "histogram_every", "bins", "average_fraction"};
  reject_unknown(j, allowed, "");
  std::string missing;
  for (const char* key : {"lambda", "delta_amp", "b_rate", "t_end", "init"}) {
    if (!j.contains(key)) missing += missing.empty() ? key : std::string(", ") + key;
  }
  if (!missing.empty()) throw ConfigError("config: missing required fields: " + missing);

  RunSpec spec;
  SimConfig& c = spec.sim;
  c.lambda = get_number(j, "lambda", "lambda");
  c.delta_amp = get_number(j, "delta_amp", "delta_amp");
  c.b_rate = get_number(j, "b_rate", "b_rate");
  c.t_end = get_number(j, "t_end", "t_end");
  c.init = parse_init(j.at("init"));
  if (j.contains("a_rate")) c.a_rate = get_number(j, "a_rate", "a_rate");
  if (j.contains("m_party")) c.m_party = get_number(j, "m_party", "m_party");
  if (j.contains("n_particles")) c.n_particles = get_count(j, "n_particles", "n_particles");
  if (j.contains("dt")) c.dt = get_number(j, "dt", "dt");
  if (j.contains("seed")) c.seed = get_count(j, "seed", "seed");
  if (j.contains("output_every")) c.output_every = get_count(j, "output_every", "output_every");
  if (j.contains("kernel")) {
    const json& k = j.at("kernel");
    if (!k.is_string()) fail("kernel", "must be a string");
    const auto name = k.get<std::string>();
    if (name == "invariant_flux") {
      c.kernel = Kernel::invariant_flux;
    } else if (name == "inline_flux") {
      c.kernel = Kernel::inline_flux;
    } else {
      fail("kernel", "must be 'invariant_flux' or 'inline_flux'");
    }
  }
  if (j.contains("histogram_every")) spec.histogram_every = get_count(j, "histogram_every", "histogram_every");
  if (j.contains("bins")) spec.bins = static_cast<int>(get_count(j, "bins", "bins"));
  if (j.contains("average_fraction")) spec.average_fraction = get_number(j, "average_fraction", "average_fraction");
  spec.validate();
  return spec;
}

RunSpec load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) {
    throw ConfigError("config: " + path.string() +
                      " is empty; required fields: lambda, delta_amp, b_rate, t_end, init");
  }
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("config: " + path.string() + ": " + e.what());
  }
  return parse_config(j);
}

json to_json(const RunSpec& spec) {
  const SimConfig& c = spec.sim;
  json init;
  if (c.init.kind == InitialCondition::Kind::equilibrium) {
    init["equilibrium"] = {{"chi0", c.init.chi0}, {"mbar0", c.init.mbar0}};
  } else {
    json rs = json::array();
    for (const auto& r : c.init.ranges) rs.push_back({{"lo", r.lo}, {"hi", r.hi}, {"weight", r.weight}});
    init["ranges"] = rs;
  }
  return {{"lambda", c.lambda},
          {"delta_amp", c.delta_amp},
          {"a_rate", c.a_rate},
          {"b_rate", c.b_rate},
          {"m_party", c.m_party},
          {"n_particles", c.n_particles},
          {"dt", c.dt},
          {"t_end", c.t_end},
          {"seed", c.seed},
          {"init", init},
          {"output_every", c.output_every},
          {"kernel", kernel_name(c.kernel)},
          {"histogram_every", spec.histogram_every},
          {"bins", spec.bins},
          {"average_fraction", spec.average_fraction}};
}

}  // namespace opdyn

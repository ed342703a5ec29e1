#include "doctest.h"
#include "opdyn/diagnostics.hpp"
#include "opdyn/dsmc.hpp"

#include <numeric>

using namespace opdyn;

namespace {

SimConfig base(std::uint64_t n = 20000) {
  SimConfig c;
  c.n_particles = n;
  c.init.ranges = {{0.99, 1.0, 1.0}, {-1.0, -0.99, 1.0}};
  return c;
}

long double total_momentum(const EnsembleState& s) {
  long double t = 0.0L;
  for (double p : s.p) t += p;
  return t;
}

}  // namespace

TEST_CASE("initial ranges") {
  SimConfig c = base();
  auto s = init_ensemble(c);
  for (double p : s.p) {
    const double m = Momentum(p).opinion();
    CHECK(std::abs(m) >= 0.99 - 1e-15);
    CHECK(std::abs(m) < 1.0);
  }
  c.init.ranges = {{0.99, 1.0, 1.0}, {-1.0, -0.9, 1.0}};
  s = init_ensemble(c);
  std::size_t pos = 0;
  for (double p : s.p) {
    const double m = Momentum(p).opinion();
    CHECK(((m >= 0.99 - 1e-15 && m < 1.0) || (m > -1.0 && m <= -0.9 + 1e-15)));
    pos += m > 0;
  }
  // equal weights give equal mass per range
  CHECK(std::abs(double(pos) / c.n_particles - 0.5) < 4.0 * 0.5 / std::sqrt(double(c.n_particles)));
  c.init.ranges = {{-1e-4, 1e-4, 1.0}};
  const FlowState f = measure(init_ensemble(c));
  CHECK(std::abs(f.mbar) < 1e-5);
  CHECK(f.chi > 1e7);
}

TEST_CASE("configuration validation names the field") {
  SimConfig c = base();
  c.lambda = 1.5;
  CHECK_THROWS_WITH_AS(c.validate(), doctest::Contains("lambda"), ConfigError);
  c = base();
  c.init.ranges.clear();
  CHECK_THROWS_WITH_AS(c.validate(), doctest::Contains("init.ranges"), ConfigError);
  c = base();
  c.init.ranges = {{0.5, 0.2, 1.0}};
  CHECK_THROWS_WITH_AS(c.validate(), doctest::Contains("init.ranges[0]"), ConfigError);
  c = base();
  c.dt = 0.5;
  CHECK_THROWS_WITH_AS(c.validate(), doctest::Contains("dt"), ConfigError);
  c = base();
  c.m_party = 1.0;
  CHECK_THROWS_WITH_AS(c.validate(), doctest::Contains("m_party"), ConfigError);
  c = base();
  c.n_particles = 1;
  CHECK_THROWS_WITH_AS(c.validate(), doctest::Contains("n_particles"), ConfigError);
}

TEST_CASE("party drift") {
  SimConfig c = base(10);
  EnsembleState s = init_ensemble(c);
  const auto before = s.p;
  vlasov_step(s, c, 1.0);
  CHECK(s.p == before);
  c.b_rate = 0.1;
  s.p.assign(10, 1.0);
  vlasov_step(s, c, 1.0);
  for (double p : s.p) CHECK(p == doctest::Approx(std::exp(-0.1)).epsilon(1e-15));
  c.m_party = 0.6;
  vlasov_step(s, c, 1e6);
  for (double p : s.p) CHECK(p == c.party_momentum());
  CHECK(c.party_momentum() == doctest::Approx(0.75));
}

TEST_CASE("two particles at +-p compromise to rest") {
  SimConfig c = base(2);
  c.a_rate = 1.0;
  EnsembleState s;
  s.p = {3.0, -3.0};
  // dt large enough that a candidate is drawn; the acceptance g/2 < 1 may reject it.
  while (s.collisions == 0) collision_step(s, c, 0.1);
  CHECK(s.p[0] == 0.0);
  CHECK(s.p[1] == 0.0);
}

TEST_CASE("collisions conserve total momentum over a run") {
  SimConfig c = base(2000);
  c.lambda = 0.3;
  c.delta_amp = 5.0;
  c.t_end = 1.0;
  EnsembleState s = init_ensemble(c);
  const long double p0 = total_momentum(s);
  double scale = 0.0;
  for (double p : s.p) scale += std::abs(p);
  while (s.collisions < 1000000) {
    advance(s, c, c.dt);
    for (double p : s.p) CHECK_FALSE(std::abs(Momentum(p).opinion()) >= 1.0);
  }
  CHECK(std::abs(static_cast<double>(total_momentum(s) - p0)) <= 1e-9 * scale);
  CHECK(s.max_g <= 2.0);
  CHECK(s.p.size() == 2000);
}

TEST_CASE("candidate rate and acceptance") {
  SimConfig c = base(10000);
  c.lambda = 1.0;
  EnsembleState s = init_ensemble(c);
  const int steps = 200;
  for (int i = 0; i < steps; ++i) collision_step(s, c, c.dt);
  const double expected = c.a_rate * (c.n_particles - 1) * c.dt * steps;
  CHECK(std::abs(double(s.candidates) - expected) < 5.0 * std::sqrt(expected));
  // Every pair of this bimodal ensemble straddles 0 with probability 1/2 and g ~ 2 then.
  CHECK(s.acceptance_ratio() == doctest::Approx(0.5 * 0.5 * 1.98).epsilon(0.02));
}

TEST_CASE("identical seeds give identical runs") {
  SimConfig c = base(3000);
  c.delta_amp = 1.0;
  c.t_end = 2.0;
  std::vector<double> a, b;
  run(c, [&](const EnsembleState& s) { a.insert(a.end(), s.p.begin(), s.p.end()); });
  run(c, [&](const EnsembleState& s) { b.insert(b.end(), s.p.begin(), s.p.end()); });
  CHECK(a == b);
  c.seed = 2;
  std::vector<double> d;
  run(c, [&](const EnsembleState& s) { d.insert(d.end(), s.p.begin(), s.p.end()); });
  CHECK(a != d);
}

TEST_CASE("sink schedule") {
  SimConfig c = base(100);
  c.t_end = 1.01;
  c.output_every = 5;
  std::vector<double> ts;
  const auto sum = run(c, [&](const EnsembleState& s) { ts.push_back(s.time); });
  CHECK(ts.front() == 0.0);
  CHECK(ts.back() == doctest::Approx(1.01));
  CHECK(sum.steps == 21);
  CHECK(ts.size() == 1 + 4 + 1);
}

TEST_CASE("elastic exchange is a null process") {
  SimConfig c;
  c.lambda = 1.0;
  c.n_particles = 100000;
  c.init.kind = InitialCondition::Kind::equilibrium;
  c.init.chi0 = 2.0;
  c.init.mbar0 = 0.3;
  EnsembleState s = init_ensemble(c);
  const FlowState f0 = measure(s);
  for (int i = 0; i < 100; ++i) advance(s, c, c.dt);
  const FlowState f1 = measure(s);
  // 1D elastic exchange swaps momenta: the multiset is unchanged.
  CHECK(f1.chi == doctest::Approx(f0.chi).epsilon(1e-12));
  CHECK(f1.mbar == doctest::Approx(f0.mbar).epsilon(1e-12));
  CHECK(s.collisions > 0);
}

TEST_CASE("non-finite momentum aborts with a diagnostic") {
  SimConfig c = base(10);
  c.lambda = 1.0;
  c.delta_amp = 1e308;
  c.t_end = 50.0;
  CHECK_THROWS_WITH_AS(run(c, {}), doctest::Contains("non-finite momentum"), SimulationError);
}

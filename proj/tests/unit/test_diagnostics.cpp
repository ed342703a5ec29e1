#include "doctest.h"
#include "oracles.hpp"
#include "opdyn/diagnostics.hpp"
#include "opdyn/specfun.hpp"

using namespace opdyn;
using oracle::rel;

namespace {

std::vector<double> mj_ensemble(double chi, double mbar, std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> p(n);
  for (double& x : p) x = mj_sample({1.0, mbar, chi}, rng).p();
  return p;
}

/// Equilibrium N and T at rest from quadrature, normalised to N^0 = 1.
std::pair<TwoVector, SymTensor2> mj_moments_quadrature(double chi) {
  auto w = [chi](double p) { return std::exp(-chi * (std::hypot(1.0, p) - 1.0)); };
  const double y = std::acosh(1.0 + 800.0 / chi);
  const double n0 = oracle::real_line(w, y);
  const double t00 = oracle::real_line([&](double p) { return std::hypot(1.0, p) * w(p); }, y) / n0;
  const double t11 = oracle::real_line([&](double p) { return p * p / std::hypot(1.0, p) * w(p); }, y) / n0;
  return {{1.0, 0.0}, {t00, 0.0, t11}};
}

}  // namespace

TEST_CASE("rest and mirrored ensembles") {
  const std::vector<double> rest(100, 0.0);
  const Moments m = particle_moments(rest);
  CHECK(m.n_flux == TwoVector{1.0, 0.0});
  CHECK(m.t.t00 == 1.0);
  CHECK(m.t.t01 == 0.0);
  CHECK(m.t.t11 == 0.0);
  const FlowState f = measure(rest);
  CHECK(f.e == 1.0);
  CHECK(f.chi == kChiCap);
  CHECK(f.cold);
  CHECK(f.theta == doctest::Approx(1.0 / kChiCap));
  CHECK(phi_measure(rest) == 0.0);

  std::vector<double> mirror = mj_ensemble(1.5, 0.2, 1000, 1);
  const std::size_t n = mirror.size();
  for (std::size_t i = 0; i < n; ++i) mirror.push_back(-mirror[i]);
  const Moments mm = particle_moments(mirror);
  CHECK(std::abs(mm.n_flux.a1) < 1e-15);
  CHECK(std::abs(mm.t.t01) < 1e-15);
  CHECK_THROWS_AS((void)particle_moments(std::vector<double>{}), std::invalid_argument);
}

TEST_CASE("equilibrium moments from quadrature") {
  for (double chi : {0.2, 1.0, 30.0}) {
    const auto [n, t] = mj_moments_quadrature(chi);
    const FlowState f = eckart_decompose(n, t);
    CAPTURE(chi);
    CHECK(rel(f.chi, chi) < 1e-6);
    CHECK(std::abs(f.q1) < 1e-12);
    CHECK(std::abs(dot(f.u, f.u) - 1.0) < 1e-10);
    // With the printed 1/3 factors the trace terms leave -(2/3) T^11 in Pi and
    // +(2/3) T^11 in Pi<11>; with the (1+1)-D projection both vanish.
    CHECK(f.pi_dyn == doctest::Approx(-2.0 / 3.0 * t.t11).epsilon(1e-6));
    CHECK(f.pi11 == doctest::Approx(2.0 / 3.0 * t.t11).epsilon(1e-6));
    const FlowState g = eckart_decompose(n, t, -1.0, {1.0});
    CHECK(std::abs(g.pi_dyn) < 1e-6 * t.t11);
    CHECK(std::abs(g.pi11) < 1e-6 * t.t11);
  }
}

TEST_CASE("scalars agree between a drifting and a resting equilibrium ensemble") {
  const FlowState f = measure(mj_ensemble(2.0, 0.0, 400000, 3));
  const FlowState g = measure(mj_ensemble(2.0, 0.5, 400000, 4));
  // N^0 is 1 by construction, so n = 1/U^0.
  CHECK(rel(g.chi, f.chi) < 0.01);
  CHECK(rel(g.chi, 2.0) < 0.01);
  CHECK(std::abs(g.mbar - 0.5) < 0.005);
  CHECK(rel(g.n, 1.0 / g.u.a0) < 1e-12);
  CHECK(rel(f.n, 1.0 / f.u.a0) < 1e-12);
}

TEST_CASE("boosted equilibrium sample") {
  const auto p = mj_ensemble(2.0, 0.5, 1000000, 5);
  const FlowState f = measure(p);
  CHECK(rel(f.chi, 2.0) < 0.01);
  CHECK(std::abs(f.mbar - 0.5) < 0.002);
  CHECK(f.u.a1 == doctest::Approx(0.5 / std::sqrt(0.75)).epsilon(0.005));
  CHECK(f.c_param == doctest::Approx(f.u.a1 * specfun::bessel_k_ratio(2, 1, f.chi)).epsilon(1e-12));
}

TEST_CASE("energy and decision parameter of a rest sample") {
  const auto p = mj_ensemble(2.0, 0.0, 1000000, 7);
  const Moments m = particle_moments(p);
  CHECK(rel(m.t.t00 / m.n_flux.a0, energy_density(2.0)) < 0.005);
  const double phi_ref = (1.0 + 2.0) * std::exp(-2.0) / (4.0 * specfun::bessel_k(1, 2.0));
  CHECK(rel(phi_measure(p), phi_ref) < 0.01);
  CHECK(rel(mj_phi_at_rest(2.0), phi_ref) < 1e-12);
  const FlowState f = measure(p);
  CHECK(rel(chi_from_energy(energy_density(f.chi)), f.chi) < 1e-8);
}

TEST_CASE("degenerate flux") {
  CHECK_THROWS_AS((void)eckart_decompose({1.0, 1.0}, {}), DegenerateFlowError);
  CHECK_THROWS_AS((void)eckart_decompose({1.0, 2.0}, {}), DegenerateFlowError);
}

TEST_CASE("histogram against the matched equilibrium") {
  const auto p = mj_ensemble(2.0, 0.3, 200000, 9);
  const HistogramPair h = histogram_vs_mj(p, 100);
  double mass_f = 0.0, mass_mj = 0.0;
  for (std::size_t k = 0; k < h.f.size(); ++k) {
    mass_f += h.f[k] * h.width;
    mass_mj += h.f_mj[k] * h.width;
  }
  CHECK(mass_f == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(mass_mj == doctest::Approx(1.0).epsilon(1e-6));
  const ChiSquare cs = chi_square(h);
  // 1 % upper quantile of chi^2 with dof ~ 100 is below dof + 2.33 sqrt(2 dof) + 3.
  CHECK(cs.dof > 50);
  CHECK(cs.stat < cs.dof + 2.33 * std::sqrt(2.0 * cs.dof) + 3.0);
  CHECK_THROWS_AS((void)histogram_vs_mj(p, 5), std::invalid_argument);

  std::vector<double> sym = mj_ensemble(1.0, 0.0, 50000, 4);
  const std::size_t n = sym.size();
  for (std::size_t i = 0; i < n; ++i) sym.push_back(-sym[i]);
  const HistogramPair hs = histogram_vs_mj(sym, 50);
  for (std::size_t k = 0; k < 25; ++k) CHECK(std::abs(hs.counts[k] - hs.counts[49 - k]) <= 2.0);
}

TEST_CASE("equilibrium density in m integrates to one") {
  for (double mbar : {0.0, 0.6}) {
    const double total = oracle::finite([&](double m) { return mj_density_in_m(m, mbar, 3.0); }, -1.0, 1.0);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
  }
}

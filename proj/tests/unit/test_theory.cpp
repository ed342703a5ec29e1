#include "doctest.h"
#include "oracles.hpp"
#include "opdyn/equilibrium.hpp"
#include "opdyn/specfun.hpp"
#include "opdyn/theory.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <sstream>
#include <stdexcept>

using namespace opdyn;
using namespace opdyn::theory;
using oracle::rel;

namespace {

/// D^2 n^2 A / (16 K1^2) int int |sin w - sin s| exp(-chi (sec s + sec w)) (cos^3 w + cos^3 s) dw ds
double heating_small_delta_oracle(double chi, double delta) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
  const double h = M_PI / 2.0;
  auto inner = [&](double s) {
    auto g = [&](double w) {
      const double cw = std::cos(w), cs = std::cos(s);
      if (cw <= 0.0 || cs <= 0.0) return 0.0;
      return std::abs(std::sin(w) - std::sin(s)) * std::exp(-chi * (1.0 / cs + 1.0 / cw)) * (cw * cw * cw + cs * cs * cs);
    };
    return GK::integrate(g, -h, s, 12, 1e-12) + GK::integrate(g, s, h, 12, 1e-12);
  };
  const double k1 = specfun::bessel_k(1, chi);
  return delta * delta / (16.0 * k1 * k1) * GK::integrate(inner, -h, h, 12, 1e-11);
}

/// d ln chi / dt for L = 0 exchange at rest: (A/2) <g dE> / (chi de/dchi), with the
/// pair average over the rest-frame density exp(-chi p0) / (2 K1) in dp.
double cooling_rate_oracle(double chi) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
  const double ym = std::acosh(1.0 + 700.0 / chi);
  const double k1s = specfun::bessel_k_scaled(1, chi);
  auto dens = [&](double y) { return std::exp(-2.0 * chi * std::sinh(0.5 * y) * std::sinh(0.5 * y)) * std::cosh(y) / (2.0 * k1s); };
  auto inner = [&](double y) {
    auto g = [&](double z) {
      const double p = std::sinh(y), q = std::sinh(z);
      const double mid = 0.5 * (p + q);
      const double de = 2.0 * std::hypot(1.0, mid) - std::hypot(1.0, p) - std::hypot(1.0, q);
      return std::abs(std::tanh(y) - std::tanh(z)) * de * dens(z);
    };
    return dens(y) * (GK::integrate(g, -ym, y, 15, 1e-11) + GK::integrate(g, y, ym, 15, 1e-11));
  };
  const double mean = GK::integrate(inner, -ym, ym, 15, 1e-10);
  const double h = 1e-5 * chi;
  const double dedchi = (energy_density(chi + h) - energy_density(chi - h)) / (2.0 * h);
  return 0.5 * mean / (chi * dedchi);
}

}  // namespace

TEST_CASE("psi1 limits, symmetry and the zero-flow form") {
  CHECK(std::abs(psi1(1e-4, 0.0) - 0.125) < 1e-3);
  CHECK(std::abs(psi1_zero(1e-4) - 0.125) < 1e-3);
  CHECK(std::abs(psi1_zero(200.0) * std::sqrt(200.0 * M_PI) / 2.0 - 1.0) < 0.05);
  for (double chi : lin_space(0.1, 50.0, 500)) CHECK(rel(psi1(chi, 0.0), psi1_zero(chi)) < 1e-10);
  for (double chi : {0.01, 0.5, 3.0, 40.0})
    for (double c : {0.3, 1.0, 4.0}) CHECK(psi1(chi, c) == doctest::Approx(psi1(chi, -c)).epsilon(1e-13));
  for (double chi : log_space(1e-3, 1e5, 50)) CHECK(std::isfinite(psi1_zero(chi)));
  CHECK_THROWS_AS((void)psi1_zero(0.0), std::domain_error);
}

TEST_CASE("psi1 peak") {
  const Peak pk = find_peak(psi1_zero, 0.1, 100.0);
  CHECK(std::abs(pk.value - 0.295) < 0.01 * 0.295);
  CHECK(std::abs(pk.x - 4.14) < 0.02 * 4.14);
}

TEST_CASE("psi2 limits and symmetry") {
  CHECK(std::abs(psi2(1e-4, 0.0) - 1.0) < 1e-3);
  CHECK(std::abs(psi2(1e-4, 1.0) - 1.0) < 1e-3);
  CHECK(std::abs(psi2(1e4, 0.0) - 2.0) < 1e-2);
  for (double chi : {0.05, 1.0, 30.0})
    for (double p : {0.5, 2.0, 5.0}) CHECK(psi2(chi, p) == doctest::Approx(psi2(chi, -p)).epsilon(1e-13));
}

TEST_CASE("psi2 peak height grows with |P|") {
  double prev = 0.0;
  for (double p : {2.0, 3.0, 5.0}) {
    const Peak pk = find_peak([p](double c) { return psi2(c, p); }, 1e-2, 1e3);
    CHECK(pk.x > 1e-2);
    CHECK(pk.x < 1e3);
    CHECK(pk.value > prev);
    prev = pk.value;
  }
}

TEST_CASE("limiting cooling laws and flow solutions") {
  CHECK(chi_limit({0.01, 1.0, CoolingRegime::small_chi_collision}, 8.0) == doctest::Approx(0.01 * M_E).epsilon(1e-14));
  CHECK(chi_limit({100.0, 1.0, CoolingRegime::large_chi_collision}, 0.0) == doctest::Approx(100.0));
  CHECK(chi_limit({1.0, 0.1, CoolingRegime::large_chi_vlasov}, 10.0) == doctest::Approx(std::exp(2.0)).epsilon(1e-14));
  CHECK(chi_limit({1.0, 0.1, CoolingRegime::small_chi_vlasov}, 10.0) == doctest::Approx(M_E).epsilon(1e-14));
  CHECK(chi_limit({4.0, 1.0, CoolingRegime::large_chi_collision}, std::sqrt(M_PI)) == doctest::Approx(9.0));
  CHECK_THROWS_AS((void)chi_limit({1.0, 1.0, CoolingRegime::small_chi_collision}, -1.0), std::domain_error);

  for (double chi : {0.1, 1.0, 100.0}) CHECK(u1_inelastic(chi, 0.0) == 0.0);
  CHECK(std::abs(u1_inelastic(1e4, 1.0) - (1.0 - 1.5e-4 + 1.875e-8)) < 1e-11);
  CHECK(u1_inelastic(1.0, 1.0) == doctest::Approx(0.601907230197235 / 1.62483889863518).epsilon(1e-12));
  const double r = specfun::bessel_k_ratio(1, 2, 2.0);
  CHECK(u1_vlasov(0.0, 2.0, 0.7, 0.3, 0.1) == doctest::Approx(r * 1.0));
  CHECK(u1_vlasov(55.0, 2.0, 0.7, 0.0, 0.1) == doctest::Approx(r * 0.7));
  CHECK(std::abs(u1_vlasov(100.0, 2.0, 0.7, 1.0, 0.1) - r * 0.7) < 5e-5 * r);
}

TEST_CASE("heating rate") {
  CHECK(heating_rate_mj(1.0, 0.0) == 0.0);
  const double h1 = heating_rate_mj(1.0, 1e-3);
  const double h2 = heating_rate_mj(1.0, 2e-3);
  CHECK(h1 > 0.0);
  CHECK(std::abs(h2 / h1 - 4.0) < 0.08);
  const double oracle = heating_small_delta_oracle(1.0, 1e-3);
  CHECK(rel(h1, oracle) < 0.01);
  CHECK(rel(heating_rate_small_delta(1.0, 1e-3), oracle) < 1e-6);
  CHECK(heating_rate_mj(10.0, -1e-2) >= 0.0);
  CHECK(heating_rate_mj(10.0, 1e-2) == doctest::Approx(heating_rate_mj(10.0, -1e-2)).epsilon(1e-8));
  CHECK(heating_rate_mj(1.0, 1.0) > 0.0);
}

TEST_CASE("equilibrium cooling rate of the particle kernel") {
  CHECK(rel(equilibrium_cooling_rate(1.0), cooling_rate_oracle(1.0)) < 1e-5);
  CHECK(rel(equilibrium_cooling_rate(25.0), cooling_rate_oracle(25.0)) < 1e-5);
  CHECK(std::abs(equilibrium_cooling_rate(1e-3) - 0.5) < 1e-3);
  CHECK(rel(equilibrium_cooling_rate(1000.0), psi1_zero(1000.0)) < 0.01);
  CHECK(equilibrium_cooling_rate(1.0, 1.0) == doctest::Approx(0.0).epsilon(1e-8));
}

TEST_CASE("steady states: normalisation and zero flux") {
  const SteadyStateSpec specs[] = {{SteadyVariant::toscani_sq, 0.5, 0.3},
                                   {SteadyVariant::toscani_abs, 0.7, -0.2},
                                   {SteadyVariant::toscani_lin, 0.4, 0.1},
                                   {SteadyVariant::relativistic, 0.5, 0.3},
                                   {SteadyVariant::relativistic, 0.05, -0.6}};
  for (const auto& s : specs) {
    const SteadyState f(s);
    const double total = oracle::finite([&](double m) { return f(m); }, -1.0, 0.0) +
                         oracle::finite([&](double m) { return f(m); }, 0.0, 1.0);
    CHECK(std::abs(total - 1.0) < 1e-8);
    for (double m : lin_space(-0.95, 0.95, 39)) CHECK(f(m) >= 0.0);
  }
  auto phi_of = [](SteadyVariant v, double m) {
    switch (v) {
      case SteadyVariant::toscani_sq: return (1 - m * m) * (1 - m * m);
      case SteadyVariant::toscani_abs: return (1 - std::abs(m)) * (1 - std::abs(m));
      default: return 1 - m * m;
    }
  };
  for (int k = 0; k < 3; ++k) {
    const auto& s = specs[k];
    const SteadyState f(s);
    for (double m : lin_space(-0.9, 0.9, 37)) {
      if (std::abs(m) < 1e-3) continue;
      const double h = 1e-5;
      auto lg = [&](double x) { return std::log(phi_of(s.variant, x)) + f.log_density(x); };
      const double d = (lg(m + h) - lg(m - h)) / (2 * h);
      const double residual = 0.5 * s.lambda * d + (m - s.mbar) / phi_of(s.variant, m);
      CAPTURE(m);
      CHECK(std::abs(residual) < 1e-5 * (1.0 + std::abs((m - s.mbar) / phi_of(s.variant, m))));
    }
  }
}

TEST_CASE("linear steady state with one vanishing exponent") {
  const double mbar = 0.2, lam = 1.0 - mbar;
  const SteadyState f({SteadyVariant::toscani_lin, lam, mbar});
  const double a = (1.0 + mbar) / lam - 1.0;
  for (double m : lin_space(-0.99, 0.99, 41)) {
    const double ref = std::pow(1.0 + m, a) * (a + 1.0) / std::pow(2.0, a + 1.0);
    CHECK(rel(f(m), ref) < 1e-9);
  }
}

TEST_CASE("relativistic steady state is the equilibrium in the opinion variable") {
  const double lam = 0.5, mbar = 0.3;
  const SteadyState f({SteadyVariant::relativistic, lam, mbar});
  const MjState st{1.0, mbar, 1.0 / lam};
  auto g = [&](double m) { return mj_pdf(opinion_to_momentum(m), st); };
  const double norm = oracle::finite(g, -1.0, 1.0);
  for (double m : lin_space(-0.999, 0.999, 1000)) CHECK(rel(f(m), g(m) / norm) < 1e-10);
  const SteadyState sym({SteadyVariant::relativistic, 0.3, 0.0});
  for (double m : {0.1, 0.5, 0.9}) CHECK(sym(m) == doctest::Approx(sym(-m)).epsilon(1e-14));
  for (double m : {0.01, 0.3}) CHECK(sym(0.0) > sym(m));
}

TEST_CASE("steady state errors") {
  CHECK_THROWS_AS(SteadyState({SteadyVariant::relativistic, 0.0, 0.0}), std::domain_error);
  CHECK_THROWS_WITH_AS(SteadyState({SteadyVariant::toscani_sq, 0.5, 1.0}), doctest::Contains("m = +1"), std::domain_error);
  CHECK_THROWS_WITH_AS(SteadyState({SteadyVariant::toscani_lin, 0.5, -1.2}), doctest::Contains("m = -1"), std::domain_error);
}

TEST_CASE("find_peak and tables") {
  const Peak pk = find_peak([](double x) { return x * std::exp(-x); }, 0.01, 100.0);
  CHECK(pk.x == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(pk.value == doctest::Approx(std::exp(-1.0)).epsilon(1e-10));
  std::ostringstream os;
  const std::vector<double> chis = {1.0, 4.14}, cs = {0.0, 1.0};
  write_psi1_table(os, chis, cs);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  CHECK(line == "chi,c,psi1");
  int rows = 0;
  while (std::getline(is, line)) ++rows;
  CHECK(rows == 4);
  const auto ls = log_space(1e-3, 1e3, 7);
  CHECK(ls.front() == doctest::Approx(1e-3));
  CHECK(ls[3] == doctest::Approx(1.0));
  CHECK(ls.back() == doctest::Approx(1e3));
}

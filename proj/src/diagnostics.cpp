#include "opdyn/diagnostics.hpp"

#include "opdyn/equilibrium.hpp"
#include "opdyn/quadrature.hpp"
#include "opdyn/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace opdyn {

Moments particle_moments(std::span<const double> p) {
  if (p.empty()) throw std::invalid_argument("particle_moments: empty ensemble");
  long double n1 = 0.0L, t00 = 0.0L, t01 = 0.0L, t11 = 0.0L;
  for (double x : p) {
    const double e = std::hypot(1.0, x);
    n1 += x / e;
    t00 += e;
    t01 += x;
    t11 += x * (x / e);
  }
  const long double inv = 1.0L / static_cast<long double>(p.size());
  Moments m;
  m.count = p.size();
  m.n_flux = {1.0, static_cast<double>(n1 * inv)};
  m.t = {static_cast<double>(t00 * inv), static_cast<double>(t01 * inv), static_cast<double>(t11 * inv)};
  // Second pass in rapidity about the mean flow: p.U = cosh(y - ybar).
  const double mbar = m.n_flux.a1;
  if (std::abs(mbar) < 1.0) {
    const double ybar = std::atanh(mbar);
    long double ex = 0.0L;
    for (double x : p) {
      const double dy = std::asinh(x) - ybar;
      const double sh = std::sinh(0.5 * dy);
      ex += std::cosh(dy) * (2.0 * sh * sh) / std::hypot(1.0, x);
    }
    m.excess = static_cast<double>(ex * inv);
  } else {
    m.excess = -1.0;
  }
  return m;
}

FlowState eckart_decompose(TwoVector n_flux, const SymTensor2& t, double excess, const EckartOptions& opt) {
  const double nn = (n_flux.a0 - n_flux.a1) * (n_flux.a0 + n_flux.a1);
  if (!(nn > 0.0) || !(n_flux.a0 > 0.0)) {
    throw DegenerateFlowError("eckart_decompose: particle flux is not future timelike");
  }
  FlowState fs;
  fs.n = std::sqrt(nn);
  fs.u = {n_flux.a0 / fs.n, n_flux.a1 / fs.n};
  fs.mbar = n_flux.a1 / n_flux.a0;
  const double ul[2] = {fs.u.a0, -fs.u.a1};
  const double uu[2] = {fs.u.a0, fs.u.a1};
  double utu = 0.0;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) utu += ul[a] * t(a, b) * ul[b];
  fs.e = utu / fs.n;
  const double e_minus_1 = excess > 0.0 ? excess / fs.n : fs.e - 1.0;
  if (e_minus_1 <= energy_excess(kChiCap)) {
    fs.chi = kChiCap;
    fs.cold = true;
  } else {
    fs.chi = chi_from_excess(e_minus_1);
    fs.cold = fs.chi >= kChiCap;
  }
  fs.theta = 1.0 / fs.chi;
  fs.pressure = fs.n / fs.chi;

  // Projectors: upper-upper, mixed (upper, lower), lower-lower.
  auto d_up = [&](int a, int b) { return eta(a, b) - uu[a] * uu[b]; };
  auto d_mix = [&](int a, int g) { return (a == g ? 1.0 : 0.0) - uu[a] * ul[g]; };
  auto d_low = [&](int a, int b) { return eta(a, b) - ul[a] * ul[b]; };
  double trace = 0.0;
  for (int g = 0; g < 2; ++g)
    for (int d = 0; d < 2; ++d) trace += d_low(g, d) * t(g, d);
  const double f = opt.trace_factor;
  double shear = 0.0;
  for (int g = 0; g < 2; ++g)
    for (int d = 0; d < 2; ++d) shear += d_mix(1, g) * d_mix(1, d) * t(g, d);
  fs.pi11 = shear - f * d_up(1, 1) * trace;
  fs.pi_dyn = -f * trace - fs.pressure;
  double q = 0.0;
  for (int g = 0; g < 2; ++g)
    for (int b = 0; b < 2; ++b) q += d_mix(1, g) * ul[b] * t(b, g);
  fs.q1 = q;
  fs.c_param = fs.cold ? fs.u.a1 : fs.u.a1 / specfun::bessel_k_ratio(1, 2, fs.chi);
  return fs;
}

double phi_measure(std::span<const double> p) {
  if (p.empty()) return 0.0;
  long double s = 0.0L;
  for (double x : p) s += std::abs(x);
  return static_cast<double>(s / static_cast<long double>(p.size()));
}

FlowState measure(std::span<const double> p, double t, const EckartOptions& opt) {
  const Moments m = particle_moments(p);
  FlowState fs = eckart_decompose(m.n_flux, m.t, m.excess, opt);
  fs.t = t;
  fs.phi = phi_measure(p);
  return fs;
}

FlowState measure(const EnsembleState& s, const EckartOptions& opt) { return measure(s.p, s.time, opt); }

double mj_density_in_m(double m, double mbar, double chi) {
  if (!(std::abs(m) < 1.0)) return 0.0;
  const double dy = std::atanh(m) - std::atanh(mbar);
  const double sh = std::sinh(0.5 * dy);
  const double arg = chi * 2.0 * sh * sh;
  if (arg > 745.0) return 0.0;
  const double g = 1.0 / std::sqrt((1.0 - m) * (1.0 + m));
  const double u0 = 1.0 / std::sqrt((1.0 - mbar) * (1.0 + mbar));
  return std::exp(-arg) * g * g * g / (2.0 * specfun::bessel_k_scaled(1, chi) * u0);
}

HistogramPair histogram_vs_mj(std::span<const double> p, int bins) {
  if (bins < 10) throw std::invalid_argument("histogram_vs_mj: need at least 10 bins");
  HistogramPair h;
  h.flow = measure(p);
  h.width = 2.0 / bins;
  const auto nb = static_cast<std::size_t>(bins);
  h.centers.resize(nb);
  h.counts.assign(nb, 0.0);
  h.f.resize(nb);
  h.f_mj.resize(nb);
  h.expected.resize(nb);
  for (double x : p) {
    const double m = x / std::hypot(1.0, x);
    auto k = static_cast<long>(std::floor((m + 1.0) / h.width));
    k = std::clamp(k, 0L, static_cast<long>(bins) - 1);
    h.counts[static_cast<std::size_t>(k)] += 1.0;
  }
  const double total = static_cast<double>(p.size());
  const double mbar = h.flow.mbar;
  const double chi = h.flow.chi;
  const bool defined = std::abs(mbar) < 1.0 && chi > 0.0 && std::isfinite(chi);
  // Bin masses in rapidity y = atanh(m), where dm = sech^2 y dy; the
  // integrand is clipped where exp(-chi (cosh(y - y0) - 1)) underflows.
  const double y0 = defined ? std::atanh(mbar) : 0.0;
  const double reach = defined ? std::acosh(1.0 + 745.0 / chi) : 0.0;
  const double norm = defined ? 2.0 * specfun::bessel_k_scaled(1, chi) / std::sqrt((1.0 - mbar) * (1.0 + mbar)) : 1.0;
  auto weight = [&](double y) {
    const double sh = std::sinh(0.5 * (y - y0));
    return std::exp(-2.0 * chi * sh * sh) * std::cosh(y) / norm;
  };
  auto bin_mass = [&](double lo, double hi) {
    if (!defined) return 0.0;
    const double a = std::max(lo <= -1.0 ? -INFINITY : std::atanh(lo), y0 - reach);
    const double b = std::min(hi >= 1.0 ? INFINITY : std::atanh(hi), y0 + reach);
    if (!(b > a)) return 0.0;
    if (y0 > a && y0 < b) {
      return quad::finite(weight, a, y0, 1e-8, 1e-16).value + quad::finite(weight, y0, b, 1e-8, 1e-16).value;
    }
    return quad::finite(weight, a, b, 1e-8, 1e-16).value;
  };
  for (std::size_t k = 0; k < nb; ++k) {
    const double lo = -1.0 + h.width * static_cast<double>(k);
    const double hi = k + 1 == nb ? 1.0 : lo + h.width;
    h.centers[k] = 0.5 * (lo + hi);
    h.f[k] = h.counts[k] / (total * h.width);
    const double mass = bin_mass(lo, hi);
    h.f_mj[k] = mass / h.width;
    h.expected[k] = mass * total;
  }
  return h;
}

ChiSquare chi_square(const HistogramPair& h, double min_expected) {
  ChiSquare r;
  int used = 0;
  for (std::size_t k = 0; k < h.counts.size(); ++k) {
    if (h.expected[k] < min_expected) continue;
    const double d = h.counts[k] - h.expected[k];
    r.stat += d * d / h.expected[k];
    ++used;
  }
  r.dof = std::max(0, used - 1);
  return r;
}

}  // namespace opdyn

#include "opdyn/theory.hpp"

#include "opdyn/collision.hpp"
#include "opdyn/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace opdyn::theory {
namespace {

using ld = long double;

void require_chi(double chi, const char* who) {
  if (!(chi > 0.0) || !std::isfinite(chi)) throw std::domain_error(std::string(who) + ": chi must be positive");
}

// Scaled K_0..K_3 at x, as long double.
struct ScaledK {
  ld k0, k1, k2, k3;
};

ScaledK scaled_k(double x) {
  return {specfun::bessel_k_scaled(0, x), specfun::bessel_k_scaled(1, x), specfun::bessel_k_scaled(2, x),
          specfun::bessel_k_scaled(3, x)};
}

}  // namespace

double psi1(double chi, double c) {
  require_chi(chi, "psi1");
  // Every term carries exp(-5 chi) after scaling: one K(2chi) times three K(chi)
  // in the numerator, five K(chi) in the denominator.
  const ScaledK k = scaled_k(chi);
  const ScaledK k2x = scaled_k(2.0 * chi);
  const ld x = chi;
  const ld c2 = static_cast<ld>(c) * c;
  const ld ratio = k.k1 / k.k2;
  const ld pre = 1.0L / std::sqrt(1.0L + c2 * ratio * ratio);
  const ld num = x * x * k.k2 * (2.0L * c2 * x * k2x.k2 * k.k1 * k.k1 + (2.0L * x * k2x.k0 + k2x.k1) * k.k2 * k.k2);
  const ld x2 = x * x;
  const ld x4 = x2 * x2;
  const ld k0 = k.k0;
  const ld k1 = k.k1;
  const ld den = 2.0L * x2 * (c2 * x4 + 8.0L * c2 * x2 + 3.0L * x2 + 8.0L) * k1 * k1 * k1 * k0 * k0 +
                 2.0L * x * (6.0L * x2 - x4 * c2 + 8.0L * x2 * c2 + 24.0L) * k1 * k1 * k1 * k1 * k0 -
                 2.0L * (c2 * x4 * x2 + 6.0L * c2 * x4 - 4.0L * x2 - 16.0L) * k1 * k1 * k1 * k1 * k1 +
                 x2 * x * (4.0L * c2 * x2 + x2 - 8.0L) * k1 * k1 * k0 * k0 * k0 - x4 * x * k0 * k0 * k0 * k0 * k0 -
                 6.0L * x4 * k1 * k0 * k0 * k0 * k0;
  return static_cast<double>(pre * num / den);
}

double psi1_zero(double chi) {
  require_chi(chi, "psi1_zero");
  // Numerator ~ exp(-2chi), denominator ~ exp(-2chi): scale both.
  const auto [a0, a1] = specfun::bessel_k01_scaled(chi);
  const auto [b0, b1] = specfun::bessel_k01_scaled(2.0 * chi);
  const ld x = chi;
  const ld k0 = a0;
  const ld k1 = a1;
  const ld num = 2.0L * x * b0 + b1;
  // chi (chi^2+4) K1^2 - chi^3 K0^2 = chi^3 (K1 - K0)(K1 + K0) + 4 chi K1^2
  const ld den = x * x * x * (k1 - k0) * (k1 + k0) + 4.0L * x * k1 * k1;
  return static_cast<double>(num / den);
}

double psi2(double chi, double p_drive) {
  require_chi(chi, "psi2");
  const ScaledK k = scaled_k(chi);
  const ld x = chi;
  const ld p2 = static_cast<ld>(p_drive) * p_drive;
  const ld k0 = k.k0;
  const ld k1 = k.k1;
  const ld k2 = k.k2;
  const ld num = 4.0L * x * k1 * k2 *
                 (p2 * x * k1 * k1 * k1 + 4.0L * p2 * k2 * k1 * k1 - p2 * x * k2 * k2 * k1 + k2 * k2 * k2);
  const ld brace = -2.0L * x * x * k0 * k0 * k0 - x * (x * x + 8.0L) * k1 * k0 * k0 +
                   (x * x - 8.0L) * k1 * k1 * k0 + x * (x * x + 6.0L) * k1 * k1 * k1;
  const ld den = 4.0L * p2 * k1 * k1 * brace + x * x * k2 * k2 * k2 * k2 * k2 - 2.0L * x * x * k1 * k1 * k2 * k2 * k2 +
                 x * (x * k0 - 6.0L * k1) * k2 * k2 * k2 * k2;
  return static_cast<double>(-num / den);
}

double chi_limit(const CoolingCurve& curve, double t) {
  if (!(curve.chi0 > 0.0)) throw std::domain_error("chi_limit: chi0 must be positive");
  if (!(curve.rate_const > 0.0)) throw std::domain_error("chi_limit: rate constant must be positive");
  if (!(t >= 0.0)) throw std::domain_error("chi_limit: t must be non-negative");
  const double r = curve.rate_const;
  switch (curve.regime) {
    case CoolingRegime::small_chi_collision:
      return curve.chi0 * std::exp(r * t / 8.0);
    case CoolingRegime::large_chi_collision: {
      const double s = r * t / std::sqrt(std::numbers::pi) + std::sqrt(curve.chi0);
      return s * s;
    }
    case CoolingRegime::small_chi_vlasov:
      return curve.chi0 * std::exp(r * t);
    case CoolingRegime::large_chi_vlasov:
      return curve.chi0 * std::exp(2.0 * r * t);
  }
  throw std::invalid_argument("chi_limit: unknown regime");
}

double u1_inelastic(double chi_t, double c) {
  require_chi(chi_t, "u1_inelastic");
  return c * specfun::bessel_k_ratio(1, 2, chi_t);
}

double u1_vlasov(double t, double chi_t, double p_drive, double script_c, double b) {
  require_chi(chi_t, "u1_vlasov");
  if (!(t >= 0.0)) throw std::domain_error("u1_vlasov: t must be non-negative");
  if (!(b > 0.0)) throw std::domain_error("u1_vlasov: B must be positive");
  return specfun::bessel_k_ratio(1, 2, chi_t) * (p_drive + script_c * std::exp(-b * t));
}

namespace {

// E(x + d) + E(x - d) - 2 E(x) for E(x) = sqrt(1 + x^2), written without the
// first-order cancellation.
double second_difference(double x, double d) {
  const double e = std::hypot(1.0, x);
  const double ep = std::hypot(1.0, x + d);
  const double em = std::hypot(1.0, x - d);
  const double sp = ep + e;
  const double sm = em + e;
  return d * d * ((1.0 / sp + 1.0 / sm) - 8.0 * x * x / (sp * sm * (ep + em)));
}

// sec(w) - 1
double sec_minus_one(double w) {
  const double s = std::sin(0.5 * w);
  return 2.0 * s * s / std::cos(w);
}

// int int |sin w - sin s| exp(-chi (sec w - 1 + sec s - 1)) g(w, s) over the
// square, with g symmetric: twice the integral over s < w. The inner integral
// has the kink of |sin w - sin s| at its upper end.
double symmetric_square_integral(double chi, const std::function<double(double, double)>& g) {
  const double h = 0.5 * std::numbers::pi;
  constexpr double tol = 1e-10;
  auto inner = [&](double w) {
    const double ew = sec_minus_one(w);
    if (!std::isfinite(ew) || chi * ew > 745.0) return 0.0;
    const double sw = std::sin(w);
    auto f = [&](double s) {
      const double es = sec_minus_one(s);
      const double arg = chi * (ew + es);
      if (!std::isfinite(arg) || arg > 745.0) return 0.0;
      return (sw - std::sin(s)) * std::exp(-arg) * g(w, s);
    };
    return quad::smooth(f, -h, w, tol, 15, 1e-18).value;
  };
  return 2.0 * quad::smooth(inner, -h, h, tol, 15).value;
}

}  // namespace

double heating_rate_mj(double chi, double delta, double a, double n) {
  require_chi(chi, "heating_rate_mj");
  if (delta == 0.0) return 0.0;
  const double k1 = specfun::bessel_k_scaled(1, chi);
  // The exp(2 chi) of 1/K1^2 cancels against exp(-2 chi) pulled out of the weight.
  const double pre = n * n * a / (8.0 * k1 * k1);
  const double integral = symmetric_square_integral(chi, [delta](double w, double s) {
    return 0.5 * (second_difference(std::tan(w), delta) + second_difference(std::tan(s), delta));
  });
  return pre * integral;
}

double heating_rate_small_delta(double chi, double delta, double a, double n) {
  require_chi(chi, "heating_rate_small_delta");
  const double k1 = specfun::bessel_k_scaled(1, chi);
  const double pre = n * n * a * delta * delta / (16.0 * k1 * k1);
  const double integral = symmetric_square_integral(chi, [](double w, double s) {
    const double cw = std::cos(w);
    const double cs = std::cos(s);
    return cw * cw * cw + cs * cs * cs;
  });
  return pre * integral;
}

double equilibrium_cooling_rate(double chi, double lambda, double a) {
  require_chi(chi, "equilibrium_cooling_rate");
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw std::domain_error("equilibrium_cooling_rate: lambda in [0, 1]");
  // Elastic exchange swaps the pair.
  if (lambda == 1.0) return 0.0;
  // Rapidity cutoff where the weight exp(-chi (cosh y - 1)) drops below e^-740.
  const double ymax = std::acosh(1.0 + 740.0 / chi);
  const double gain = 0.5 * (1.0 + lambda);
  constexpr double tol = 1e-9;
  auto weight = [chi](double y) {
    const double sh = std::sinh(0.5 * y);
    return std::exp(-2.0 * chi * sh * sh) * std::cosh(y);
  };
  // Symmetric integrand: twice the triangle y* < y.
  auto inner = [&](double y) {
    const double wy = weight(y);
    if (wy == 0.0) return 0.0;
    const Momentum p{std::sinh(y)};
    const double my = std::tanh(y);
    auto f = [&](double ys) {
      const Momentum q{std::sinh(ys)};
      const double k = gain * (q.p() - p.p());
      const double de = energy_change({p, q}, {Momentum{p.p() + k}, Momentum{q.p() - k}});
      return (my - std::tanh(ys)) * de * weight(ys);
    };
    return wy * quad::smooth(f, -ymax, y, tol, 15, 1e-13 * (1.0 + 1.0 / chi)).value;
  };
  const double k1 = specfun::bessel_k_scaled(1, chi);
  const double mean_g_de =
      2.0 * quad::smooth(inner, -ymax, ymax, tol, 15, 1e-13 * (1.0 + 1.0 / chi)).value / (4.0 * k1 * k1);
  const double de_dt = 0.5 * a * mean_g_de;
  const auto [s0, s1] = specfun::bessel_k01_scaled(chi);
  const double r = s0 / s1;
  const double de_dchi = (r - 1.0) * (r + 1.0) + r / chi - 1.0 / (chi * chi);
  return de_dt / (chi * de_dchi);
}

SteadyState::SteadyState(const SteadyStateSpec& spec) : spec_(spec) {
  if (!(spec.lambda > 0.0) || !std::isfinite(spec.lambda)) {
    throw std::domain_error("steady state: lambda must be positive, got " + std::to_string(spec.lambda));
  }
  if (!(std::abs(spec.mbar) < 1.0)) {
    const char* end = spec.mbar >= 1.0 ? "m = +1" : "m = -1";
    throw std::domain_error(std::string("steady state: normalisation diverges at ") + end + " for mbar = " +
                            std::to_string(spec.mbar));
  }
  // Locate the mode on a grid and integrate exp(raw_log - peak) split there.
  double best_m = 0.0;
  double best = -std::numeric_limits<double>::infinity();
  constexpr int grid = 4000;
  for (int i = 1; i < grid; ++i) {
    const double m = -1.0 + 2.0 * i / grid;
    const double v = raw_log(m);
    if (v > best) {
      best = v;
      best_m = m;
    }
  }
  // Refine the split point for sharply peaked densities.
  const double step = 2.0 / grid;
  double lo = std::max(-1.0 + 1e-15, best_m - step);
  double hi = std::min(1.0 - 1e-15, best_m + step);
  for (int it = 0; it < 100 && hi - lo > 1e-14; ++it) {
    const double m1 = lo + (hi - lo) / 3.0;
    const double m2 = hi - (hi - lo) / 3.0;
    if (raw_log(m1) < raw_log(m2)) {
      lo = m1;
    } else {
      hi = m2;
    }
  }
  const double mode = 0.5 * (lo + hi);
  const double peak = std::max(best, raw_log(mode));
  auto f = [&](double m) {
    const double v = raw_log(m) - peak;
    return std::isfinite(v) ? std::exp(v) : 0.0;
  };
  double total = 0.0;
  try {
    // Split at the mode and at m = 0, where the |m| variant has a kink.
    std::vector<double> cuts{-1.0, mode, 0.0, 1.0};
    std::sort(cuts.begin(), cuts.end());
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      // f <= 1, so a sliver shorter than 1e-12 is below the tolerance.
      if (cuts[i + 1] - cuts[i] > 1e-12) total += quad::finite(f, cuts[i], cuts[i + 1], 1e-12, 1e-14).value;
    }
  } catch (const quad::NumericalError& e) {
    throw std::domain_error(std::string("steady state: normalisation integral failed: ") + e.what());
  }
  if (!std::isfinite(total) || !(total > 0.0)) {
    throw std::domain_error("steady state: normalisation integral is not finite");
  }
  log_norm_ = peak + std::log(total);
}

double SteadyState::raw_log(double m) const {
  const double lam = spec_.lambda;
  const double mb = spec_.mbar;
  switch (spec_.variant) {
    case SteadyVariant::toscani_sq:
      return (-2.0 + mb / (2.0 * lam)) * std::log1p(m) + (-2.0 - mb / (2.0 * lam)) * std::log1p(-m) -
             (1.0 - mb * m) / (lam * (1.0 - m * m));
    case SteadyVariant::toscani_abs: {
      const double am = std::abs(m);
      const double sg = m > 0.0 ? 1.0 : (m < 0.0 ? -1.0 : 0.0);
      return (-2.0 - 2.0 / lam) * std::log1p(-am) - 2.0 * (1.0 - mb * sg) / (lam * (1.0 - am));
    }
    case SteadyVariant::toscani_lin:
      return ((1.0 + mb) / lam - 1.0) * std::log1p(m) + ((1.0 - mb) / lam - 1.0) * std::log1p(-m);
    case SteadyVariant::relativistic: {
      // -(p.U)/lambda, shifted by 1/lambda; p.U - 1 = 2 sinh^2 of half the rapidity gap.
      const double sh = std::sinh(0.5 * (std::atanh(m) - std::atanh(mb)));
      return -2.0 * sh * sh / lam;
    }
  }
  throw std::invalid_argument("steady state: unknown variant");
}

double SteadyState::log_density(double m) const {
  if (!(std::abs(m) < 1.0)) throw std::domain_error("steady state: |m| must be < 1");
  return raw_log(m) - log_norm_;
}

double SteadyState::operator()(double m) const { return std::exp(log_density(m)); }

double SteadyState::unnormalized(double m) const {
  if (!(std::abs(m) < 1.0)) throw std::domain_error("steady state: |m| must be < 1");
  double v = raw_log(m);
  if (spec_.variant == SteadyVariant::relativistic) v -= 1.0 / spec_.lambda;
  return std::exp(v);
}

double steady_state_pdf(double m, const SteadyStateSpec& spec) { return SteadyState(spec)(m); }

Peak find_peak(const std::function<double(double)>& f, double lo, double hi, int grid, double rel_tol) {
  if (!(lo > 0.0) || !(hi > lo)) throw std::invalid_argument("find_peak: need 0 < lo < hi");
  if (grid < 3) grid = 3;
  const double a = std::log(lo);
  const double b = std::log(hi);
  int best = 0;
  double best_v = -std::numeric_limits<double>::infinity();
  for (int i = 0; i <= grid; ++i) {
    const double v = f(std::exp(a + (b - a) * i / grid));
    if (v > best_v) {
      best_v = v;
      best = i;
    }
  }
  double l = a + (b - a) * std::max(0, best - 1) / grid;
  double r = a + (b - a) * std::min(grid, best + 1) / grid;
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = r - g * (r - l);
  double x2 = l + g * (r - l);
  double f1 = f(std::exp(x1));
  double f2 = f(std::exp(x2));
  while (r - l > rel_tol) {
    if (f1 < f2) {
      l = x1;
      x1 = x2;
      f1 = f2;
      x2 = l + g * (r - l);
      f2 = f(std::exp(x2));
    } else {
      r = x2;
      x2 = x1;
      f2 = f1;
      x1 = r - g * (r - l);
      f1 = f(std::exp(x1));
    }
  }
  const double x = std::exp(0.5 * (l + r));
  return {x, f(x)};
}

void write_psi1_table(std::ostream& os, std::span<const double> chis, std::span<const double> cs) {
  os << "chi,c,psi1\n";
  os.precision(12);
  for (double c : cs) {
    for (double chi : chis) os << chi << ',' << c << ',' << psi1(chi, c) << '\n';
  }
}

void write_psi2_table(std::ostream& os, std::span<const double> chis, std::span<const double> ps) {
  os << "chi,P,psi2\n";
  os.precision(12);
  for (double p : ps) {
    for (double chi : chis) os << chi << ',' << p << ',' << psi2(chi, p) << '\n';
  }
}

std::vector<double> log_space(double lo, double hi, int n) {
  if (!(lo > 0.0) || !(hi > 0.0) || n < 1) throw std::invalid_argument("log_space: bad range");
  std::vector<double> v(static_cast<std::size_t>(n));
  if (n == 1) {
    v[0] = lo;
    return v;
  }
  const double a = std::log(lo);
  const double b = std::log(hi);
  for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = std::exp(a + (b - a) * i / (n - 1));
  return v;
}

std::vector<double> lin_space(double lo, double hi, int n) {
  if (n < 1) throw std::invalid_argument("lin_space: n must be positive");
  std::vector<double> v(static_cast<std::size_t>(n));
  if (n == 1) {
    v[0] = lo;
    return v;
  }
  for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (n - 1);
  return v;
}

}  // namespace opdyn::theory

#include "opdyn/specfun.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace opdyn::specfun {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kMaxIter = 100000;

void check_argument(double x) {
  if (!(x > 0.0)) {
    throw std::domain_error("bessel_k: argument must be positive, got " + std::to_string(x));
  }
}

// Ascending series, A&S 9.6.11 with n = 0 and n = 1:
//   K0 = -ln(x/2) I0 + sum psi(k+1) t^k / (k!)^2
//   K1 = 1/x + ln(x/2) I1 - (x/4) sum [psi(k+1) + psi(k+2)] t^k / (k! (k+1)!)
// with t = x^2/4 and psi(k+1) = -gamma + H_k.
ScaledPair series01(double x) {
  const double t = 0.25 * x * x;
  const double log_half = std::log(0.5 * x);
  const double euler = std::numbers::egamma;

  double term0 = 1.0;  // t^k / (k!)^2
  double term1 = 1.0;  // t^k / (k! (k+1)!)
  double psi_k1 = -euler;        // psi(k+1)
  double psi_k2 = 1.0 - euler;   // psi(k+2)
  double i0 = 0.0, i1 = 0.0, s0 = 0.0, s1 = 0.0;
  for (int k = 0; k < 200; ++k) {
    i0 += term0;
    i1 += term1;
    s0 += psi_k1 * term0;
    s1 += (psi_k1 + psi_k2) * term1;
    // x <= 2 keeps t <= 1, so the magnitudes of i0 and s0 are O(1).
    if (term0 * (1.0 + std::abs(psi_k2)) < 1e-18) break;
    const double kk = static_cast<double>(k + 1);
    term0 *= t / (kk * kk);
    term1 *= t / (kk * (kk + 1.0));
    psi_k1 = psi_k2;
    psi_k2 += 1.0 / (kk + 1.0);
  }
  i1 *= 0.5 * x;
  const double k0 = -log_half * i0 + s0;
  const double k1 = 1.0 / x + log_half * i1 - 0.25 * x * s1;
  const double ex = std::exp(x);
  return {k0 * ex, k1 * ex};
}

// Steed's CF2 with Temme's normalisation for order zero (Numerical Recipes,
// bessik, x >= 2 branch with mu = 0). Returns scaled values.
ScaledPair continued_fraction01(double x) {
  const double a1 = 0.25;  // 1/4 - mu^2
  double b = 2.0 * (1.0 + x);
  double d = 1.0 / b;
  double h = d;
  double delh = d;
  double q1 = 0.0;
  double q2 = 1.0;
  double q = a1;
  double c = a1;
  double a = -a1;
  double s = 1.0 + q * delh;
  int i = 2;
  for (; i <= kMaxIter; ++i) {
    a -= 2.0 * (i - 1);
    c = -a * c / i;
    const double qnew = (q1 - b * q2) / a;
    q1 = q2;
    q2 = qnew;
    q += c * qnew;
    b += 2.0;
    d = 1.0 / (b + a * d);
    delh = (b * d - 1.0) * delh;
    h += delh;
    const double dels = q * delh;
    s += dels;
    if (std::abs(dels / s) < kEps) break;
  }
  if (i > kMaxIter) {
    throw std::runtime_error("bessel_k: continued fraction failed to converge at x = " +
                             std::to_string(x));
  }
  h *= a1;
  const double k0 = std::sqrt(std::numbers::pi / (2.0 * x)) / s;
  const double k1 = k0 * (x + 0.5 - h) / x;
  return {k0, k1};
}

}  // namespace

ScaledPair bessel_k01_scaled(double x) {
  check_argument(x);
  return x <= kSeriesCut ? series01(x) : continued_fraction01(x);
}

double bessel_k_scaled(int n, double x) {
  check_argument(x);
  n = std::abs(n);
  const auto [k0, k1] = bessel_k01_scaled(x);
  if (n == 0) return k0;
  double km = k0;
  double kn = k1;
  for (int j = 1; j < n; ++j) {
    const double next = km + (2.0 * j / x) * kn;
    km = kn;
    kn = next;
  }
  return kn;
}

double bessel_k(int n, double x) {
  const double scaled = bessel_k_scaled(n, x);
  // exp(-x) underflows before scaled overflows for the orders used here.
  return scaled * std::exp(-x);
}

double bessel_k_ratio(int n, int m, double x) {
  return bessel_k_scaled(n, x) / bessel_k_scaled(m, x);
}

}  // namespace opdyn::specfun

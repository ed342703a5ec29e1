#include "opdyn/equilibrium.hpp"

#include "opdyn/specfun.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace opdyn {

void MjState::validate() const {
  if (!(n > 0.0) || !std::isfinite(n)) throw std::domain_error("MjState: n must be positive");
  if (!(std::abs(mbar) < 1.0)) throw std::domain_error("MjState: |mbar| must be < 1");
  if (!(chi > 0.0) || !std::isfinite(chi)) throw std::domain_error("MjState: chi must be positive");
}

double mj_pdf(Momentum p, const MjState& state) {
  // p.U - 1 = cosh(y - ybar) - 1 = 2 sinh^2((y - ybar)/2) in terms of rapidities.
  const double dy = std::asinh(p.p()) - std::atanh(state.mbar);
  const double sh = std::sinh(0.5 * dy);
  const double excess = 2.0 * sh * sh;
  return state.n * std::exp(-state.chi * excess) / (2.0 * specfun::bessel_k_scaled(1, state.chi));
}

namespace {

// Rest-frame draw of |p| from h(x) = exp(-chi (sqrt(1 + x^2) - 1)) on x >= 0.
// log h is concave, so a flat core up to the point a where log h(a) = -1 and
// the tangent line beyond a bound h from above.
double rest_frame_magnitude(double chi, Rng& rng) {
  const double a = std::sqrt(2.0 / chi + 1.0 / (chi * chi));
  const double slope = chi * a / std::hypot(1.0, a);
  const double core_mass = a;
  const double tail_mass = std::exp(-1.0) / slope;
  const double total = core_mass + tail_mass;
  for (;;) {
    double x = 0.0;
    double log_env = 0.0;
    if (uniform01(rng) * total < core_mass) {
      x = a * uniform01(rng);
    } else {
      const double e = -std::log1p(-uniform01(rng));
      x = a + e / slope;
      log_env = -1.0 - e;
    }
    const double log_h = -chi * x * x / (std::hypot(1.0, x) + 1.0);
    if (std::log(uniform01(rng)) <= log_h - log_env) return x;
  }
}

}  // namespace

Momentum mj_sample(const MjState& state, Rng& rng) {
  double x = rest_frame_magnitude(state.chi, rng);
  if (uniform01(rng) < 0.5) x = -x;
  if (state.mbar == 0.0) return Momentum{x};
  const double m = x / std::hypot(1.0, x);
  if (-state.mbar * m > uniform01(rng)) x = -x;
  return boost(Momentum{x}, state.mbar);
}

Tensor::Tensor(int rank) : rank_(rank), c_(std::size_t{1} << rank, 0.0) {
  if (rank < 0 || rank > 6) throw std::invalid_argument("Tensor: rank out of range");
}

std::size_t Tensor::offset(std::initializer_list<int> indices) const {
  if (static_cast<int>(indices.size()) != rank_) throw std::invalid_argument("Tensor: wrong index count");
  std::size_t k = 0;
  for (int i : indices) {
    if (i != 0 && i != 1) throw std::out_of_range("Tensor: index must be 0 or 1");
    k = (k << 1) | static_cast<std::size_t>(i);
  }
  return k;
}

double Tensor::operator()(std::initializer_list<int> indices) const { return c_[offset(indices)]; }
double& Tensor::at(std::initializer_list<int> indices) { return c_[offset(indices)]; }

namespace {

// Sum over all ways of grouping `slots` into k eta-pairs and leftover U factors;
// accumulates into by_pairs[k].
void pairings(const std::array<int, 6>& idx, unsigned used, int rank, int pairs, double weight,
              TwoVector u, std::array<double, 4>& by_pairs) {
  int first = -1;
  for (int s = 0; s < rank; ++s) {
    if (!(used & (1u << s))) {
      first = s;
      break;
    }
  }
  if (first < 0) {
    by_pairs[pairs] += weight;
    return;
  }
  const unsigned with_first = used | (1u << first);
  const double u_comp = idx[first] == 0 ? u.a0 : u.a1;
  pairings(idx, with_first, rank, pairs, weight * u_comp, u, by_pairs);
  for (int s = first + 1; s < rank; ++s) {
    if (used & (1u << s)) continue;
    const double e = eta(idx[first], idx[s]);
    if (e == 0.0) continue;
    pairings(idx, with_first | (1u << s), rank, pairs + 1, weight * e, u, by_pairs);
  }
}

// Shared assembly for Z and Z*: entry = sum_k (-1)^k coef[k] * S_k(indices).
Tensor assemble(int rank, TwoVector u, const std::array<double, 4>& coef) {
  Tensor t(rank);
  for (std::size_t flat = 0; flat < t.size(); ++flat) {
    std::array<int, 6> idx{};
    for (int s = 0; s < rank; ++s) idx[s] = static_cast<int>((flat >> (rank - 1 - s)) & 1u);
    std::array<double, 4> by_pairs{};
    pairings(idx, 0u, rank, 0, 1.0, u, by_pairs);
    double v = 0.0;
    for (int k = 0; 2 * k <= rank; ++k) v += (k % 2 == 0 ? 1.0 : -1.0) * coef[k] * by_pairs[k];
    t.flat(flat) = v;
  }
  return t;
}

}  // namespace

Tensor z_moments(double chi, TwoVector u, int rank, bool scaled) {
  if (rank < 0 || rank > 4) throw std::invalid_argument("z_moments: rank must be in 0..4");
  if (!(chi > 0.0)) throw std::domain_error("z_moments: chi must be positive");
  const double factor = scaled ? 1.0 : std::exp(-chi);
  std::array<double, 4> coef{};
  double chi_pow = 1.0;
  for (int k = 0; 2 * k <= rank; ++k) {
    coef[k] = 2.0 * specfun::bessel_k_scaled(rank - k, chi) * factor / chi_pow;
    chi_pow *= chi;
  }
  return assemble(rank, u, coef);
}

Tensor z_star_moments(double chi, double q_star, TwoVector u, int rank, bool scaled) {
  if (rank < 0 || rank > 2) throw std::invalid_argument("z_star_moments: rank must be in 0..2");
  if (!(chi > 0.0)) throw std::domain_error("z_star_moments: chi must be positive");
  if (!(q_star >= 2.0)) throw std::domain_error("z_star_moments: Q* must be >= 2");
  const double x = q_star * chi;
  const double factor = scaled ? 1.0 : std::exp(-x);
  std::array<double, 4> coef{};
  // Z* = 2 K0(x); Z*^a = 2 Q* K1(x) U^a; Z*^ab = 2 Q*^2 K2(x) U U - 2 Q* eta K1(x)/chi
  switch (rank) {
    case 0:
      coef[0] = 2.0 * specfun::bessel_k_scaled(0, x);
      break;
    case 1:
      coef[0] = 2.0 * q_star * specfun::bessel_k_scaled(1, x);
      break;
    default:
      coef[0] = 2.0 * q_star * q_star * specfun::bessel_k_scaled(2, x);
      coef[1] = 2.0 * q_star * specfun::bessel_k_scaled(1, x) / chi;
      break;
  }
  for (double& c : coef) c *= factor;
  return assemble(rank, u, coef);
}

double energy_excess(double chi) {
  if (!(chi > 0.0)) throw std::domain_error("energy_excess: chi must be positive");
  const auto [k0, k1] = specfun::bessel_k01_scaled(chi);
  return 1.0 / chi + (k0 - k1) / k1;
}

double energy_density(double chi) {
  if (!(chi > 0.0)) throw std::domain_error("energy_density: chi must be positive");
  const auto [k0, k1] = specfun::bessel_k01_scaled(chi);
  return 1.0 / chi + k0 / k1;
}

double chi_from_excess(double excess) {
  if (!(excess > 0.0)) throw std::domain_error("chi_from_excess: excess must be positive");
  if (excess <= energy_excess(kChiCap)) return kChiCap;
  if (excess >= energy_excess(kChiFloor)) return kChiFloor;
  // energy_excess decreases monotonically; bisect on log chi.
  double lo = std::log(kChiFloor);
  double hi = std::log(kChiCap);
  while (hi - lo > 1e-15 * std::max(1.0, std::abs(lo) + std::abs(hi))) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (energy_excess(std::exp(mid)) > excess) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  double chi = std::exp(0.5 * (lo + hi));
  // One Newton polish with de/dchi = r^2 + r/chi - 1 - 1/chi^2, r = K0/K1.
  const auto [k0, k1] = specfun::bessel_k01_scaled(chi);
  const double r = k0 / k1;
  const double slope = (r - 1.0) * (r + 1.0) + r / chi - 1.0 / (chi * chi);
  if (slope < 0.0) {
    const double next = chi - (energy_excess(chi) - excess) / slope;
    if (next > 0.0 && std::abs(next - chi) < 1e-6 * chi) chi = next;
  }
  return chi;
}

double chi_from_energy(double e) {
  if (!(e > 1.0)) {
    throw std::domain_error("chi_from_energy: energy per particle must exceed 1, got " + std::to_string(e));
  }
  return chi_from_excess(e - 1.0);
}

double mj_phi_at_rest(double chi, double n) {
  if (!(chi > 0.0)) throw std::domain_error("mj_phi_at_rest: chi must be positive");
  return n * (1.0 + chi) / (chi * chi * specfun::bessel_k_scaled(1, chi));
}

}  // namespace opdyn

#include "opdyn/collision.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace opdyn {
namespace {

// sqrt(1 + b^2) - sqrt(1 + a^2) = (b - a)(b + a) / (sqrt(1 + b^2) + sqrt(1 + a^2))
double energy_difference(double a, double b) {
  return (b - a) * (b + a) / (std::hypot(1.0, b) + std::hypot(1.0, a));
}

}  // namespace

void CollisionParams::validate() const {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw std::invalid_argument("lambda must lie in [0, 1], got " + std::to_string(lambda));
  }
  if (!(delta_amp >= 0.0) || !std::isfinite(delta_amp)) {
    throw std::invalid_argument("delta_amp must be finite and >= 0, got " + std::to_string(delta_amp));
  }
}

CollisionOutcome collide_direct(Momentum p, Momentum pstar, const CollisionParams& params, double delta) {
  const double k = 0.5 * (1.0 + params.lambda) * (pstar.p() - p.p() + delta);
  CollisionOutcome out;
  out.p_out = Momentum{p.p() + k};
  out.pstar_out = Momentum{pstar.p() - k};
  out.delta_used = delta;
  out.energy_change = energy_change({p, pstar}, {out.p_out, out.pstar_out});
  return out;
}

std::pair<Momentum, Momentum> collide_inverse(Momentum p, Momentum pstar, const CollisionParams& params,
                                              double delta) {
  if (params.lambda == 0.0) {
    throw std::domain_error("collide_inverse: singular for lambda = 0");
  }
  const double k = 0.5 * (1.0 + params.lambda) / params.lambda * (pstar.p() - p.p() + delta);
  return {Momentum{p.p() + k}, Momentum{pstar.p() - k}};
}

double jacobian(const CollisionParams& params, double d_delta_dp, double d_delta_dpstar) {
  if (params.lambda == 0.0) {
    throw std::domain_error("jacobian: singular for lambda = 0");
  }
  const double inv = 1.0 / params.lambda;
  const double bracket = inv + 0.5 * (1.0 + inv) * (d_delta_dpstar - d_delta_dp);
  if (bracket == 0.0) {
    throw std::domain_error("jacobian: degenerate map (zero determinant bracket)");
  }
  return 1.0 / std::abs(bracket);
}

double energy_change(std::pair<Momentum, Momentum> before, std::pair<Momentum, Momentum> after) {
  // Pair the outputs with the inputs they are closest to so each difference is small.
  const double a = before.first.p();
  const double b = before.second.p();
  const double c = after.first.p();
  const double d = after.second.p();
  const double direct = std::abs(c - a) + std::abs(d - b);
  const double crossed = std::abs(d - a) + std::abs(c - b);
  if (direct <= crossed) return energy_difference(a, c) + energy_difference(b, d);
  return energy_difference(a, d) + energy_difference(b, c);
}

}  // namespace opdyn

#include "opdyn/kinematics.hpp"

#include <stdexcept>
#include <string>

namespace opdyn {

double lorentz_factor(double m) {
  if (!(std::abs(m) < 1.0)) {
    throw std::domain_error("opinion outside (-1, 1): " + std::to_string(m));
  }
  // (1 - m)(1 + m) keeps precision near |m| = 1.
  return 1.0 / std::sqrt((1.0 - m) * (1.0 + m));
}

Momentum opinion_to_momentum(double m) { return Momentum{m * lorentz_factor(m)}; }

TwoVector flow_vector(double mbar) {
  const double g = lorentz_factor(mbar);
  return {g, g * mbar};
}

double moller_velocity(Momentum a, Momentum b) {
  // (a.b)^2 - 1 = (a^0 b - a b^0)^2 on the unit mass shell; the difference form
  // avoids cancellation when a and b are close.
  const double a0 = a.energy();
  const double b0 = b.energy();
  const double cross = std::abs(a0 * b.p() - a.p() * b0);
  return cross / (a0 * b0);
}

double moller_velocity_cm(Momentum a, Momentum b) {
  const CmDecomposition cm = cm_decompose(a, b);
  return 2.0 * std::abs(cm.relative.a1) / cm.total.a0;
}

CmDecomposition cm_decompose(Momentum a, Momentum b) {
  CmDecomposition out;
  out.total = a.four() + b.four();
  out.relative = a.four() - b.four();
  out.s = dot(out.total, out.total);
  out.q_star = std::sqrt(out.s);
  return out;
}

Momentum boost(Momentum p, double v) {
  const double g = lorentz_factor(v);
  return Momentum{g * (p.p() + v * p.energy())};
}

TwoVector boost(TwoVector a, double v) {
  const double g = lorentz_factor(v);
  return {g * (a.a0 + v * a.a1), g * (a.a1 + v * a.a0)};
}

}  // namespace opdyn

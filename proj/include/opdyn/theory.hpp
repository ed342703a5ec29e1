#pragma once

// Closed-form companions to the particle solver, all evaluated for an
// equilibrium (Maxwell-Juttner) state: cooling-rate parameters for inelastic
// exchange (psi1) and for the party drift (psi2), limiting chi(t) laws,
// U^1(t) solutions, the heating rate due to random perturbations, and the
// steady states of the bounded Fokker-Planck models.

#include "opdyn/quadrature.hpp"

#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace opdyn::theory {

/// Inelastic cooling parameter: d(1/chi)/dt = -n A (1 - L^2) psi1(chi, C) / chi,
/// with C = U^1 K2(chi)/K1(chi) the conserved flow combination. Even in C.
[[nodiscard]] double psi1(double chi, double c);

/// psi1(chi, 0) = (2 chi K0(2chi) + K1(2chi)) / (chi (chi^2+4) K1^2 - chi^3 K0^2).
/// Tends to 1/8 as chi -> 0 and to 2/sqrt(pi chi) as chi -> inf.
[[nodiscard]] double psi1_zero(double chi);

/// Drift cooling parameter: d(1/chi)/dt = -B psi2(chi, P) / chi at late times,
/// where U^1 = (K1/K2) P. Even in P; 1 at chi -> 0 and 2 at chi -> inf.
[[nodiscard]] double psi2(double chi, double p_drive);

enum class CoolingRegime { small_chi_collision, large_chi_collision, small_chi_vlasov, large_chi_vlasov };

struct CoolingCurve {
  double chi0 = 1.0;
  double rate_const = 1.0;  ///< A for the collision regimes, B for the Vlasov ones
  CoolingRegime regime = CoolingRegime::small_chi_collision;
};

/// Limiting chi(t):
///   small_chi_collision  chi0 exp(A t / 8)
///   large_chi_collision  (A t / sqrt(pi) + sqrt(chi0))^2
///   small_chi_vlasov     chi0 exp(B t)
///   large_chi_vlasov     chi0 exp(2 B t)
[[nodiscard]] double chi_limit(const CoolingCurve& curve, double t);

/// U^1 = C K1(chi)/K2(chi) under inelastic exchange.
[[nodiscard]] double u1_inelastic(double chi_t, double c);

/// U^1(t) = K1(chi)/K2(chi) (P + C' exp(-B t)) under the party drift.
[[nodiscard]] double u1_vlasov(double t, double chi_t, double p_drive, double script_c, double b);

/// Energy gain rate of an elastic (L = 1) rest-frame equilibrium under a fixed
/// perturbation delta:
///   n^2 A / (8 K1^2) int int |sin w - sin s| exp(-chi (sec s + sec w)) dE dw ds
/// over (-pi/2, pi/2)^2 with p = tan w, p* = tan s. The integrand is
/// symmetrised under w <-> s before integration, which removes the part odd in
/// delta exactly and leaves sum over x in {p, p*} of E(x+D) + E(x-D) - 2 E(x).
/// Throws quad::NumericalError when the quadrature does not converge.
[[nodiscard]] double heating_rate_mj(double chi, double delta, double a = 1.0, double n = 1.0);

/// Second-order reduction of heating_rate_mj:
///   n^2 A D^2 / (16 K1^2) int int |sin w - sin s| exp(-chi (sec s + sec w)) (cos^3 w + cos^3 s).
[[nodiscard]] double heating_rate_small_delta(double chi, double delta, double a = 1.0, double n = 1.0);

/// d ln(chi)/dt of a rest-frame equilibrium (n = 1) under exchanges with
/// coefficient lambda and pair rate A g, by direct two-dimensional quadrature
/// over rapidities:
///   (A/2) <g dE> / (chi de/dchi).
/// For lambda = 0 this tends to A/2 as chi -> 0 and to 2 A/sqrt(pi chi) for large chi.
[[nodiscard]] double equilibrium_cooling_rate(double chi, double lambda = 0.0, double a = 1.0);

enum class SteadyVariant {
  toscani_sq,   ///< diffusion weight (1 - m^2)^2
  toscani_abs,  ///< diffusion weight (1 - |m|)^2
  toscani_lin,  ///< diffusion weight 1 - m^2
  relativistic  ///< the relativistic model; its steady state is exp(-p.U / lambda)
};

struct SteadyStateSpec {
  SteadyVariant variant = SteadyVariant::relativistic;
  double lambda = 1.0;
  double mbar = 0.0;
};

/// Normalised steady state f(m) on (-1, 1), density in dm. The normalisation
/// is computed once at construction by tanh-sinh quadrature in log space.
class SteadyState {
 public:
  /// Throws std::domain_error for lambda <= 0 or |mbar| >= 1 (the message names
  /// the endpoint at which the normalisation diverges).
  explicit SteadyState(const SteadyStateSpec& spec);

  [[nodiscard]] double operator()(double m) const;
  [[nodiscard]] double log_density(double m) const;
  /// Unnormalised density exp(log f) as written with unit prefactor.
  [[nodiscard]] double unnormalized(double m) const;
  /// log of int unnormalized dm.
  [[nodiscard]] double log_normalization() const { return log_norm_; }
  [[nodiscard]] const SteadyStateSpec& spec() const { return spec_; }

 private:
  [[nodiscard]] double raw_log(double m) const;
  SteadyStateSpec spec_;
  double log_norm_ = 0.0;
};

/// Convenience wrapper building a SteadyState for a single evaluation.
[[nodiscard]] double steady_state_pdf(double m, const SteadyStateSpec& spec);

struct Peak {
  double x = 0.0;
  double value = 0.0;
};

/// Maximum of f on [lo, hi] (lo > 0): log-spaced scan, then golden-section
/// search in log x down to a relative bracket of rel_tol.
[[nodiscard]] Peak find_peak(const std::function<double(double)>& f, double lo, double hi,
                             int grid = 400, double rel_tol = 1e-6);

/// CSV grid "chi,c,psi1" over the Cartesian product.
void write_psi1_table(std::ostream& os, std::span<const double> chis, std::span<const double> cs);
/// CSV grid "chi,P,psi2".
void write_psi2_table(std::ostream& os, std::span<const double> chis, std::span<const double> ps);

/// n log-spaced values on [lo, hi].
[[nodiscard]] std::vector<double> log_space(double lo, double hi, int n);
[[nodiscard]] std::vector<double> lin_space(double lo, double hi, int n);

}  // namespace opdyn::theory

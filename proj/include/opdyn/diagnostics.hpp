#pragma once

// Macroscopic moments of a particle ensemble, their Eckart decomposition and
// comparison with the matching Maxwell-Juttner state.
//
// Particles carry weight 1/N in the invariant measure, so
//   N^a = (1/N) sum p^a / p^0,  T^ab = (1/N) sum p^a p^b / p^0,  N^0 = 1.

#include "opdyn/dsmc.hpp"
#include "opdyn/kinematics.hpp"

#include <span>
#include <stdexcept>
#include <vector>

namespace opdyn {

class DegenerateFlowError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct SymTensor2 {
  double t00 = 0.0;
  double t01 = 0.0;
  double t11 = 0.0;
  [[nodiscard]] double operator()(int a, int b) const { return a + b == 0 ? t00 : (a + b == 1 ? t01 : t11); }
};

struct Moments {
  TwoVector n_flux;  ///< N^a
  SymTensor2 t;      ///< T^ab
  /// sum over particles of (p.U)(p.U - 1)/p^0 divided by N, with U = N/|N|;
  /// lets e - 1 be formed without cancellation for cold ensembles.
  double excess = 0.0;
  std::size_t count = 0;
};

[[nodiscard]] Moments particle_moments(std::span<const double> p);
[[nodiscard]] inline Moments particle_moments(const EnsembleState& s) { return particle_moments(s.p); }

struct EckartOptions {
  /// Coefficient of the trace terms in Pi<ab> and p + Pi. The default keeps
  /// the three-dimensional 1/3; 1.0 is the (1+1)-dimensional projection.
  double trace_factor = 1.0 / 3.0;
};

struct FlowState {
  double t = 0.0;
  double n = 0.0;
  double mbar = 0.0;
  TwoVector u;
  double e = 0.0;        ///< U T U / n
  double chi = 0.0;
  double theta = 0.0;
  double pressure = 0.0; ///< equilibrium pressure n / chi
  double pi_dyn = 0.0;   ///< (p + Pi) - n/chi
  double q1 = 0.0;
  double pi11 = 0.0;
  double phi = 0.0;
  double c_param = 0.0;  ///< U^1 K2(chi)/K1(chi)
  bool cold = false;     ///< chi clamped at kChiCap
};

/// Eckart decomposition of (N, T). excess, when positive, replaces the
/// directly formed e - 1. Throws DegenerateFlowError for N.N <= 0.
[[nodiscard]] FlowState eckart_decompose(TwoVector n_flux, const SymTensor2& t, double excess = -1.0,
                                         const EckartOptions& opt = {});

/// particle_moments + eckart_decompose + phi, stamped with the state time.
[[nodiscard]] FlowState measure(const EnsembleState& s, const EckartOptions& opt = {});
[[nodiscard]] FlowState measure(std::span<const double> p, double t = 0.0, const EckartOptions& opt = {});

/// phi = (1/N) sum |p_i|.
[[nodiscard]] double phi_measure(std::span<const double> p);

struct HistogramPair {
  std::vector<double> centers;
  std::vector<double> f;       ///< empirical density in m
  std::vector<double> f_mj;    ///< bin-averaged equilibrium density in m
  std::vector<double> counts;  ///< raw counts
  std::vector<double> expected;///< equilibrium expected counts
  double width = 0.0;
  FlowState flow;
};

/// Uniform bins over (-1, 1). The equilibrium reference uses the ensemble's
/// own (mbar, chi) and is transported from dp to dm with gamma^3, normalised
/// to unit mass like the empirical density. Throws std::invalid_argument for
/// bins < 10.
[[nodiscard]] HistogramPair histogram_vs_mj(std::span<const double> p, int bins);

/// Equilibrium density in m for unit mass: f_MJ(p(m)) gamma(m)^3 / int f_MJ dp.
[[nodiscard]] double mj_density_in_m(double m, double mbar, double chi);

/// Pearson statistic over bins with expected count >= min_expected, and the
/// number of bins used.
struct ChiSquare {
  double stat = 0.0;
  int dof = 0;
};
[[nodiscard]] ChiSquare chi_square(const HistogramPair& h, double min_expected = 5.0);

}  // namespace opdyn

#pragma once

// Modified Bessel functions of the second kind K_n(x) for integer order and
// real positive argument.
//
// Small arguments (x <= 2) use the ascending series for K_0 and K_1; larger
// arguments use Steed's continued fraction with Temme's normalisation, which
// yields exp(x) K_n(x) directly and therefore never overflows. Higher orders
// come from the upward recurrence K_{n+1} = K_{n-1} + (2n/x) K_n, which is
// stable for K.

namespace opdyn::specfun {

/// Argument at which evaluation switches from the series to the continued fraction.
inline constexpr double kSeriesCut = 2.0;

/// K_n(x). Throws std::domain_error unless x > 0. Negative n uses K_{-n} = K_n.
/// Underflows to zero for x beyond ~745.
[[nodiscard]] double bessel_k(int n, double x);

/// exp(x) K_n(x); finite for all x > 0 up to the overflow of the order recurrence.
[[nodiscard]] double bessel_k_scaled(int n, double x);

/// K_n(x) / K_m(x), formed from scaled values.
[[nodiscard]] double bessel_k_ratio(int n, int m, double x);

/// exp(x) K_0(x) and exp(x) K_1(x) in one evaluation.
struct ScaledPair {
  double k0;
  double k1;
};
[[nodiscard]] ScaledPair bessel_k01_scaled(double x);

}  // namespace opdyn::specfun

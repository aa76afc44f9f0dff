#pragma once

// Independent log-gamma for cross-checks: Lanczos, g = 7, nine terms,
// evaluated in long double. Good to roughly 1e-15 relative.

#include <cmath>
#include <complex>
#include <numbers>

namespace sscat_test {

using cld = std::complex<long double>;

inline cld lanczos_log_gamma(cld z) {
  static constexpr long double p[] = {
      0.99999999999980993L,  676.5203681218851L,     -1259.1392167224028L,
      771.32342877765313L,   -176.61502916214059L,   12.507343278686905L,
      -0.13857109526572012L, 9.9843695780195716e-6L, 1.5056327351493116e-7L};
  constexpr long double pi = std::numbers::pi_v<long double>;
  if (z.real() < 0.5L) {
    // reflection; the result is only meaningful modulo 2 pi i
    return std::log(pi / std::sin(pi * z)) - lanczos_log_gamma(1.0L - z);
  }
  z -= 1.0L;
  cld x = p[0];
  for (int i = 1; i < 9; ++i) {
    x += p[i] / (z + static_cast<long double>(i));
  }
  const cld t = z + 7.5L;
  return 0.5L * std::log(2.0L * pi) + (z + 0.5L) * std::log(t) - t + std::log(x);
}

inline cld lanczos_gamma(cld z) { return std::exp(lanczos_log_gamma(z)); }

/// Difference of two angles reduced to (-pi, pi].
inline double angle_gap(double a, double b) {
  return std::remainder(a - b, 2.0 * std::numbers::pi);
}

}  // namespace sscat_test

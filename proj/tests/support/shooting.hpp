#pragma once

// Non-relativistic bound states of the approximated Varshni model by
// outward shooting:
//   psi'' + [2 mu (E - V(r)) - l(l+1) beta^2 / (1 - e^{-beta r})^2] psi = 0,
//   V(r) = a (1 - b beta e^{-beta r} / (1 - e^{-beta r})).
// The sign of psi(r_max) flips each time E crosses an eigenvalue.

#include <cmath>
#include <stdexcept>

namespace sscat_test {

struct ShootingModel {
  long double mu, a, b, beta;
  int l = 0;
};

inline long double shooting_q(const ShootingModel& m, long double e, long double r) {
  const long double x = std::exp(-m.beta * r);
  const long double z = -std::expm1(-m.beta * r);
  const long double v = m.a * (1.0L - m.b * m.beta * x / z);
  const long double cent = m.l * (m.l + 1) * m.beta * m.beta / (z * z);
  return 2.0L * m.mu * (e - v) - cent;
}

/// psi(r_max) from Numerov with psi ~ r^{l+1} at the origin.
inline long double shoot(const ShootingModel& m, long double e, long double r_max, long double h) {
  const long double h2 = h * h / 12.0L;
  long double r0 = h, r1 = 2.0L * h;
  long double y0 = std::pow(r0, m.l + 1), y1 = std::pow(r1, m.l + 1);
  long double f0 = 1.0L + h2 * shooting_q(m, e, r0);
  long double f1 = 1.0L + h2 * shooting_q(m, e, r1);
  for (long double r = r1 + h; r <= r_max; r += h) {
    const long double f2 = 1.0L + h2 * shooting_q(m, e, r);
    const long double y2 = ((12.0L - 10.0L * f1) * y1 - f0 * y0) / f2;
    y0 = y1;
    y1 = y2;
    f0 = f1;
    f1 = f2;
    if (std::abs(y1) > 1e300L) {  // keep the sign, drop the scale
      y0 /= 1e300L;
      y1 /= 1e300L;
    }
  }
  return y1;
}

/// Bisects psi(r_max) on [e_lo, e_hi]; the bracket must contain one sign change.
inline double shooting_energy(const ShootingModel& m, double e_lo, double e_hi, double r_max,
                              double h = 2e-3) {
  long double lo = e_lo, hi = e_hi;
  long double f_lo = shoot(m, lo, r_max, h);
  if (std::signbit(f_lo) == std::signbit(shoot(m, hi, r_max, h))) {
    throw std::runtime_error("shooting bracket has no sign change");
  }
  for (int i = 0; i < 80 && hi - lo > 1e-15L * std::abs(hi); ++i) {
    const long double mid = 0.5L * (lo + hi);
    const long double f_mid = shoot(m, mid, r_max, h);
    if (std::signbit(f_mid) == std::signbit(f_lo)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  return static_cast<double>(0.5L * (lo + hi));
}

}  // namespace sscat_test

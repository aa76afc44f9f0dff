#pragma once

// Complex log-gamma and the Gauss hypergeometric function 2F1 on [0, 1).
//
// Everything here is templated on the real scalar so the same code runs in
// double (the library default) and long double.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <optional>
#include <string>

#include "sscat/errors.hpp"

namespace sscat {

template <typename Real>
struct Hyp2F1Params {
  std::complex<Real> p1;
  std::complex<Real> p2;
  std::complex<Real> p3;
  Real z = 0;
};

namespace specfun_detail {

/// B_{2k} / (2k (2k - 1)) for k = 1..10.
inline constexpr long double kStirling[] = {
    1.0L / 12.0L,          -1.0L / 360.0L,      1.0L / 1260.0L,     -1.0L / 1680.0L,
    1.0L / 1188.0L,        -691.0L / 360360.0L, 1.0L / 156.0L,      -3617.0L / 122400.0L,
    43867.0L / 244188.0L,  -174611.0L / 125400.0L};

/// Below this real part the argument is shifted up before Stirling is applied.
inline constexpr double kStirlingThreshold = 12.0;

inline constexpr int kMaxSeriesTerms = 100000;
inline constexpr int kMaxTaylorTerms = 400;

/// Largest max|term| / |sum| accepted from the plain Maclaurin series.
inline constexpr double kMaxCancellation = 1e2;

/// Above this z the Maclaurin series is not tried at all.
inline constexpr double kMaxDirectZ = 0.9;

template <typename Real>
bool is_nonpositive_integer(const std::complex<Real>& z) {
  return z.imag() == Real(0) && z.real() <= Real(0) && z.real() == std::floor(z.real());
}

template <typename Real>
bool is_near_integer(const std::complex<Real>& z) {
  const Real tol = Real(1e-12) * std::max(Real(1), std::abs(z));
  return std::abs(z.imag()) <= tol && std::abs(z.real() - std::round(z.real())) <= tol;
}

template <typename Real>
struct SeriesValue {
  std::complex<Real> value;
  std::complex<Real> derivative;  ///< dF/dz
  Real cancellation;              ///< max |term| / |sum|, 1 when no cancellation
  Real scale;                     ///< largest magnitude met on the way; sets the rounding error
};

/// Plain Maclaurin series of 2F1 and of its derivative.
template <typename Real>
SeriesValue<Real> maclaurin(const std::complex<Real>& a, const std::complex<Real>& b,
                            const std::complex<Real>& c, Real z) {
  using C = std::complex<Real>;
  const Real eps = std::numeric_limits<Real>::epsilon();
  C term(1);
  C sum(1);
  C zsum(0);  // sum of n t_n = z F'(z)
  Real max_term = 1;
  bool converged = false;
  int quiet = 0;
  for (int n = 0; n < kMaxSeriesTerms; ++n) {
    const Real rn(n);
    const C ratio = (a + rn) * (b + rn) / ((c + rn) * (rn + Real(1)));
    term *= ratio * z;
    if (term == C(0)) {
      converged = true;
      break;
    }
    sum += term;
    zsum += (rn + Real(1)) * term;
    max_term = std::max(max_term, std::abs(term));
    const bool shrinking = std::abs(ratio) * z < Real(1);
    const bool small = std::abs(term) <= eps * std::abs(sum) &&
                       (rn + Real(1)) * std::abs(term) <= eps * std::abs(zsum);
    quiet = (shrinking && small) ? quiet + 1 : 0;
    if (quiet >= 2) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    throw convergence_error("2F1 power series did not converge within " +
                            std::to_string(kMaxSeriesTerms) + " terms");
  }
  const C derivative = z > Real(0) ? zsum / z : a * b / c;
  const Real magnitude = std::abs(sum);
  const Real cancellation =
      magnitude > Real(0) ? max_term / magnitude : std::numeric_limits<Real>::infinity();
  return {sum, derivative, cancellation, max_term};
}

/// State of a Taylor continuation of 2F1 along the real axis.
template <typename Real>
struct Continuation {
  Real x;
  std::complex<Real> f;
  std::complex<Real> df;
  Real scale;  ///< largest |F| met so far
};

/// Starts a continuation at a point close enough to the origin for the
/// Maclaurin series to be well conditioned, and not beyond z.
template <typename Real>
Continuation<Real> seed_continuation(const std::complex<Real>& a, const std::complex<Real>& b,
                                     const std::complex<Real>& c, Real z) {
  const Real growth = Real(1) + std::abs(a) + std::abs(b) + std::abs(a) * std::abs(b) / std::abs(c);
  Real x = std::min(z, Real(0.5) / growth);
  SeriesValue<Real> seed = maclaurin(a, b, c, x);
  for (int i = 0; i < 40 && seed.cancellation > Real(kMaxCancellation); ++i) {
    x *= Real(0.25);
    seed = maclaurin(a, b, c, x);
  }
  return {x, seed.value, seed.derivative, seed.scale};
}

/// Re-expands F in Taylor steps of the hypergeometric equation
///   z(1-z) F'' + [c - (a+b+1) z] F' - ab F = 0
/// until state.x reaches z. Each step is short enough that its local series
/// stays well conditioned.
template <typename Real>
void advance_continuation(const std::complex<Real>& a, const std::complex<Real>& b,
                          const std::complex<Real>& c, Continuation<Real>& state, Real z) {
  using C = std::complex<Real>;
  const Real eps = std::numeric_limits<Real>::epsilon();
  const C ab = a * b;
  const C q1 = -(a + b + Real(1));
  Real x = state.x;
  C f = state.f;
  C df = state.df;
  Real scale = state.scale;
  while (x < z) {
    const Real p0 = x * (Real(1) - x);
    const Real p1 = Real(1) - Real(2) * x;
    const C q0 = c + q1 * x;
    const Real omega = std::abs(q0) / p0 + std::sqrt(std::abs(ab) / p0);
    const Real h = std::min({z - x, Real(0.5) * x, Real(0.5) * (Real(1) - x), Real(1) / omega});

    // d_n = c_n h^n for the Taylor coefficients c_n of F about x.
    C d_prev = f;
    C d_curr = df * h;
    C sum = d_prev + d_curr;
    C dsum = d_curr;  // h F'(x + h)
    bool converged = false;
    int quiet = 0;
    for (int n = 0; n < kMaxTaylorTerms; ++n) {
      const Real rn(n);
      const C next = -((rn + Real(1)) * (p1 * rn + q0) * h * d_curr +
                       (-rn * (rn - Real(1)) + q1 * rn - ab) * h * h * d_prev) /
                     (p0 * (rn + Real(2)) * (rn + Real(1)));
      sum += next;
      dsum += (rn + Real(2)) * next;
      const bool small = std::abs(next) <= eps * std::abs(sum) &&
                         (rn + Real(2)) * std::abs(next) <= eps * std::abs(dsum);
      quiet = small ? quiet + 1 : 0;
      if (quiet >= 3 || (next == C(0) && d_curr == C(0))) {
        converged = true;
        break;
      }
      d_prev = d_curr;
      d_curr = next;
    }
    if (!converged) {
      throw convergence_error("2F1 Taylor continuation did not converge");
    }
    f = sum;
    df = dsum / h;
    x += h;
    scale = std::max(scale, std::abs(f));
  }
  state = {x, f, df, scale};
}

template <typename Real>
SeriesValue<Real> series_value_of(const Continuation<Real>& state) {
  const Real magnitude = std::max(std::abs(state.f), std::numeric_limits<Real>::min());
  return {state.f, state.df, state.scale / magnitude, state.scale};
}

/// Power-series route for 0 <= z < 1.
///
/// Uses the Maclaurin series when it is well conditioned, otherwise a seeded
/// Taylor continuation.
template <typename Real>
SeriesValue<Real> series_route(const std::complex<Real>& a, const std::complex<Real>& b,
                               const std::complex<Real>& c, Real z) {
  if (z <= Real(kMaxDirectZ)) {
    SeriesValue<Real> direct = maclaurin(a, b, c, z);
    if (direct.cancellation <= Real(kMaxCancellation)) {
      return direct;
    }
  }
  Continuation<Real> state = seed_continuation(a, b, c, z);
  advance_continuation(a, b, c, state, z);
  return series_value_of(state);
}

template <typename Real>
void check_hyp2f1(const std::complex<Real>& c, Real z) {
  if (!(z >= Real(0) && z < Real(1))) {
    throw domain_error("2F1 argument must lie in [0, 1)");
  }
  if (is_nonpositive_integer(c)) {
    throw pole_error("2F1 third parameter is a non-positive integer");
  }
}

}  // namespace specfun_detail

/// Analytic log-gamma: the branch that is real on the positive axis and
/// continuous on the plane cut along (-inf, 0]. The imaginary part is not
/// reduced modulo 2 pi.
template <typename Real>
std::complex<Real> log_gamma(std::complex<Real> z) {
  using C = std::complex<Real>;
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    throw domain_error("log_gamma argument must be finite");
  }
  if (specfun_detail::is_nonpositive_integer(z)) {
    throw pole_error("log_gamma pole at non-positive integer " + std::to_string(double(z.real())));
  }
  // ln Gamma(z) = ln Gamma(z + n) - sum_j Log(z + j); every Log has its cut on
  // (-inf, -j], so the sum is analytic off (-inf, 0].
  C shift_sum(0);
  C w = z;
  while (w.real() < Real(specfun_detail::kStirlingThreshold)) {
    shift_sum += std::log(w);
    w += Real(1);
  }
  const C inv = Real(1) / w;
  const C inv2 = inv * inv;
  C series(0);
  for (int k = 9; k >= 0; --k) {
    series = series * inv2 + Real(specfun_detail::kStirling[k]);
  }
  series *= inv;
  const Real half_log_two_pi = Real(0.5) * std::log(Real(2) * std::numbers::pi_v<Real>);
  return (w - Real(0.5)) * std::log(w) - w + half_log_two_pi + series - shift_sum;
}

template <typename Real>
std::complex<Real> log_gamma(Real x) {
  return log_gamma(std::complex<Real>(x, Real(0)));
}

/// Im ln Gamma(z) on the continuous branch (not a principal argument).
template <typename Real>
Real arg_gamma(std::complex<Real> z) {
  return log_gamma(z).imag();
}

/// 1/Gamma(x) for real x; zero at the non-positive integers.
template <typename Real>
Real reciprocal_gamma(Real x) {
  if (x <= Real(0) && x == std::floor(x)) {
    return Real(0);
  }
  if (x >= Real(0.5)) {
    return std::exp(-log_gamma(x).real());
  }
  // 1/Gamma(x) = Gamma(1 - x) sin(pi x) / pi
  const Real pi = std::numbers::pi_v<Real>;
  return std::exp(log_gamma(Real(1) - x).real()) * std::sin(pi * x) / pi;
}

/// 2F1 by the power-series route (see specfun_detail::series_route).
template <typename Real>
std::complex<Real> hyp2f1_series(const Hyp2F1Params<Real>& params) {
  specfun_detail::check_hyp2f1(params.p3, params.z);
  return specfun_detail::series_route(params.p1, params.p2, params.p3, params.z).value;
}

namespace specfun_detail {

template <typename Real>
struct ConnectionTerms {
  std::complex<Real> first;   ///< Gamma ratio times 2F1(a, b; 1 - d; 1 - z)
  std::complex<Real> second;  ///< (1-z)^d Gamma ratio times 2F1(c-a, c-b; 1 + d; 1 - z)
};

template <typename Real>
ConnectionTerms<Real> connection_terms(const std::complex<Real>& a, const std::complex<Real>& b,
                                       const std::complex<Real>& c, Real z, Real one_minus_z) {
  using C = std::complex<Real>;
  check_hyp2f1(c, z);
  const C d = c - a - b;
  if (is_near_integer(d)) {
    throw degenerate_connection_error("connection formula needs c - a - b non-integer");
  }
  ConnectionTerms<Real> out{C(0), C(0)};
  if (!is_nonpositive_integer(c - a) && !is_nonpositive_integer(c - b)) {
    const C ratio = std::exp(log_gamma(c) + log_gamma(d) - log_gamma(c - a) - log_gamma(c - b));
    out.first = ratio * series_route(a, b, Real(1) - d, one_minus_z).value;
  }
  if (!is_nonpositive_integer(a) && !is_nonpositive_integer(b)) {
    const C ratio = std::exp(log_gamma(c) + log_gamma(-d) - log_gamma(a) - log_gamma(b) +
                             d * std::log(one_minus_z));
    out.second = ratio * series_route(c - a, c - b, Real(1) + d, one_minus_z).value;
  }
  return out;
}

template <typename Real>
Real cancellation_of(const ConnectionTerms<Real>& t) {
  const Real sum = std::abs(t.first + t.second);
  const Real parts = std::abs(t.first) + std::abs(t.second);
  return sum > Real(0) ? parts / sum : std::numeric_limits<Real>::infinity();
}

}  // namespace specfun_detail

/// 2F1 through the z -> 1 - z connection formula. `one_minus_z` lets callers
/// that know 1 - z exactly (z = 1 - e^{-beta r}) avoid the cancellation.
///
/// The two terms can be far larger than their sum: with c - a = conj(a) and
/// c - b = conj(b) they grow like e^{pi (|Im s| - Im d / 2)}, and the result
/// keeps only about 16 - log10(cancellation) digits. See
/// hyp2f1_connection_cancellation().
template <typename Real>
std::complex<Real> hyp2f1_connection(const std::complex<Real>& a, const std::complex<Real>& b,
                                     const std::complex<Real>& c, Real z, Real one_minus_z) {
  const auto t = specfun_detail::connection_terms(a, b, c, z, one_minus_z);
  return t.first + t.second;
}

/// (|first| + |second|) / |first + second| for the connection formula.
template <typename Real>
Real hyp2f1_connection_cancellation(const Hyp2F1Params<Real>& params) {
  return specfun_detail::cancellation_of(specfun_detail::connection_terms(
      params.p1, params.p2, params.p3, params.z, Real(1) - params.z));
}

template <typename Real>
std::complex<Real> hyp2f1_connection(const Hyp2F1Params<Real>& params) {
  return hyp2f1_connection(params.p1, params.p2, params.p3, params.z, Real(1) - params.z);
}

/// Gauss 2F1(p1, p2; p3; z) for z in [0, 1): power series up to z = 0.5,
/// connection formula above. For z > 0.5 the series route (Taylor-continued)
/// is used instead when c - a - b is an integer, or when the connection terms
/// cancel by more than kMaxCancellation and the series route's own error
/// scale is the smaller one. The second condition keeps the connection
/// formula at incidental zeros of an oscillating F, where both terms are
/// modest, and drops it where F is exponentially small against them.
template <typename Real>
std::complex<Real> hyp2f1(const std::complex<Real>& a, const std::complex<Real>& b,
                          const std::complex<Real>& c, Real z, Real one_minus_z) {
  specfun_detail::check_hyp2f1(c, z);
  if (z == Real(0)) {
    return std::complex<Real>(1);
  }
  if (z <= Real(0.5) || specfun_detail::is_near_integer(c - a - b)) {
    return specfun_detail::series_route(a, b, c, z).value;
  }
  const auto t = specfun_detail::connection_terms(a, b, c, z, one_minus_z);
  if (specfun_detail::cancellation_of(t) <= Real(specfun_detail::kMaxCancellation)) {
    return t.first + t.second;
  }
  const auto series = specfun_detail::series_route(a, b, c, z);
  const Real connection_scale = std::abs(t.first) + std::abs(t.second);
  return series.scale < connection_scale ? series.value : t.first + t.second;
}

template <typename Real>
std::complex<Real> hyp2f1(const Hyp2F1Params<Real>& params) {
  return hyp2f1(params.p1, params.p2, params.p3, params.z, Real(1) - params.z);
}

/// hyp2f1 for fixed parameters at a run of increasing z. The series route
/// resumes its Taylor continuation from the previous point instead of
/// restarting at the origin, and drops the direct Maclaurin attempt once it
/// has failed. A decreasing z restarts the continuation. Values agree with
/// hyp2f1 to rounding.
template <typename Real>
class Hyp2F1Sweep {
 public:
  using Complex = std::complex<Real>;

  Hyp2F1Sweep(const Complex& a, const Complex& b, const Complex& c) : a_(a), b_(b), c_(c) {
    specfun_detail::check_hyp2f1(c, Real(0));
    degenerate_ = specfun_detail::is_near_integer(c - a - b);
  }

  Complex operator()(Real z, Real one_minus_z) {
    specfun_detail::check_hyp2f1(c_, z);
    if (z == Real(0)) {
      return Complex(1);
    }
    if (z <= Real(0.5) || degenerate_) {
      return series(z).value;
    }
    const auto t = specfun_detail::connection_terms(a_, b_, c_, z, one_minus_z);
    if (specfun_detail::cancellation_of(t) <= Real(specfun_detail::kMaxCancellation)) {
      return t.first + t.second;
    }
    const auto s = series(z);
    const Real connection_scale = std::abs(t.first) + std::abs(t.second);
    return s.scale < connection_scale ? s.value : t.first + t.second;
  }

 private:
  specfun_detail::SeriesValue<Real> series(Real z) {
    if (!direct_failed_ && z <= Real(specfun_detail::kMaxDirectZ)) {
      const auto direct = specfun_detail::maclaurin(a_, b_, c_, z);
      if (direct.cancellation <= Real(specfun_detail::kMaxCancellation)) {
        return direct;
      }
      direct_failed_ = true;
    }
    if (!state_ || z < state_->x) {
      state_ = specfun_detail::seed_continuation(a_, b_, c_, z);
    }
    specfun_detail::advance_continuation(a_, b_, c_, *state_, z);
    return specfun_detail::series_value_of(*state_);
  }

  Complex a_, b_, c_;
  bool degenerate_ = false;
  bool direct_failed_ = false;
  std::optional<specfun_detail::Continuation<Real>> state_;
};

}  // namespace sscat

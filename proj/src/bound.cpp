#include "sscat/bound.hpp"

#include <cmath>
#include <limits>

#include "sscat/errors.hpp"
#include "sscat/specfun.hpp"

namespace sscat {

namespace {

constexpr int kScanPoints = 2000;

struct ClosedChannel {
  double kappa;   // k = i kappa
  double lambda;
  double w1;      // may be negative
};

ClosedChannel closed_channel_at(const KinematicContext& ctx, const VarshniParams& p,
                                Channel channel, double eps, double kappa) {
  const double sigma = relativistic_coefficient(ctx);
  const double ll1 = static_cast<double>(channel.l) * (channel.l + 1);
  const double ab = p.a * p.b;
  const double s_ab2 = sigma * ab * ab;
  const double radicand = 0.25 + ll1 - s_ab2;
  if (radicand < 0.0) {
    throw supercritical_error("1/4 + l(l+1) - sigma a^2 b^2 is negative");
  }
  ClosedChannel out;
  out.kappa = kappa;
  out.lambda = 0.5 + std::sqrt(radicand);
  const double kb = kappa / p.beta;
  out.w1 = 2.0 * ab * (ctx.mu + sigma * eps) / p.beta - s_ab2 - ll1 + kb * kb;
  return out;
}

ClosedChannel closed_channel(const KinematicContext& ctx, const VarshniParams& p, Channel channel,
                             double energy) {
  validate(p);
  if (channel.l < 0) {
    throw domain_error("angular momentum must be non-negative");
  }
  const double sigma = relativistic_coefficient(ctx);
  const double ll1 = static_cast<double>(channel.l) * (channel.l + 1);
  const double eps = energy - p.a;
  const double k2 = 2.0 * ctx.mu * eps + sigma * eps * eps - ll1 * p.beta * p.beta;
  if (!(k2 < 0.0)) {
    throw domain_error("pole condition needs a closed channel (k^2 < 0)");
  }
  return closed_channel_at(ctx, p, channel, eps, std::sqrt(-k2));
}

double residual_of(const ClosedChannel& cc, int n, double beta) {
  const double base = n + cc.lambda + cc.kappa / beta;
  if (cc.w1 < 0.0) {
    return std::hypot(base, std::sqrt(-cc.w1));
  }
  return base - std::sqrt(cc.w1);
}

// Energy on the physical branch of the closed region for a given kappa:
// sigma eps^2 + 2 mu eps + kappa^2 - l(l+1) beta^2 = 0, root continuous with sigma -> 0.
double eps_at_kappa(const KinematicContext& ctx, const VarshniParams& p, double ll1,
                    double kappa) {
  const double sigma = relativistic_coefficient(ctx);
  const double c = kappa * kappa - ll1 * p.beta * p.beta;
  const double disc = std::max(0.0, ctx.mu * ctx.mu - sigma * c);
  return -c / (ctx.mu + std::sqrt(disc));
}

}  // namespace

double pole_condition(const KinematicContext& ctx, const VarshniParams& p, Channel channel, int n,
                      double energy) {
  return residual_of(closed_channel(ctx, p, channel, energy), n, p.beta);
}

double pole_gamma_reciprocal(const KinematicContext& ctx, const VarshniParams& p, Channel channel,
                             double energy) {
  const ClosedChannel cc = closed_channel(ctx, p, channel, energy);
  if (cc.w1 < 0.0) {
    const std::complex<double> arg(cc.lambda + cc.kappa / p.beta, -std::sqrt(-cc.w1));
    return std::exp(-log_gamma(arg).real());
  }
  return std::abs(reciprocal_gamma(cc.lambda + cc.kappa / p.beta - std::sqrt(cc.w1)));
}

BoundEnergyEquation bound_energy_equation(const KinematicContext& ctx, const VarshniParams& p,
                                          Channel channel, int n, double energy) {
  validate(p);
  const double sigma = relativistic_coefficient(ctx);
  const double ll1 = static_cast<double>(channel.l) * (channel.l + 1);
  const double eps = energy - p.a;
  const double ab = p.a * p.b;
  const double lambda = 0.5 + std::sqrt(0.25 + ll1 - sigma * ab * ab);
  const double m = n + lambda;
  const double bracket =
      (m * m - 2.0 * ab * (ctx.mu + sigma * eps) / p.beta + sigma * ab * ab + ll1) / (2.0 * m);
  return {2.0 * ctx.mu * eps + sigma * eps * eps - ll1 * p.beta * p.beta,
          -p.beta * p.beta * bracket * bracket};
}

std::optional<BoundState> solve_bound_energy(const KinematicContext& ctx, const VarshniParams& p,
                                             Channel channel, int n) {
  validate(p);
  if (n < 0) {
    throw domain_error("radial quantum number must be non-negative");
  }
  if (channel.l < 0) {
    throw domain_error("angular momentum must be non-negative");
  }
  const double sigma = relativistic_coefficient(ctx);
  const double ll1 = static_cast<double>(channel.l) * (channel.l + 1);

  // Physical closed branch: E < a and k^2 < 0, kappa from the threshold of
  // E = a up to the turning point of the quadratic in E - a.
  const double kappa_lo = std::max(p.beta * std::sqrt(ll1), 1e-9 * p.beta);
  const double kappa_hi = std::sqrt(ctx.mu * ctx.mu / sigma + ll1 * p.beta * p.beta);
  if (!(kappa_hi > kappa_lo)) {
    return std::nullopt;
  }

  auto f_at = [&](double kappa) {
    return residual_of(closed_channel_at(ctx, p, channel, eps_at_kappa(ctx, p, ll1, kappa), kappa),
                       n, p.beta);
  };

  // Log-uniform scan from threshold inward; first sign change is the state.
  const double log_ratio = std::log(kappa_hi / kappa_lo);
  double prev_kappa = kappa_lo * (1.0 + 1e-12);
  double prev_f = f_at(prev_kappa);
  for (int i = 1; i < kScanPoints; ++i) {
    double kappa = kappa_lo * std::exp(log_ratio * i / (kScanPoints - 1));
    if (i == kScanPoints - 1) {
      kappa = kappa_hi * (1.0 - 1e-12);
    }
    const double f = f_at(kappa);
    if ((prev_f < 0.0) != (f < 0.0)) {
      double lo = prev_kappa;
      double hi = kappa;
      double f_lo = prev_f;
      // Bisect to adjacent doubles; deterministic regardless of tolerance.
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) {
          break;
        }
        const double f_mid = f_at(mid);
        if ((f_mid < 0.0) == (f_lo < 0.0)) {
          lo = mid;
          f_lo = f_mid;
        } else {
          hi = mid;
        }
      }
      const double e_lo = p.a + eps_at_kappa(ctx, p, ll1, lo);
      const double e_hi = p.a + eps_at_kappa(ctx, p, ll1, hi);
      BoundState state;
      state.n = n;
      state.l = channel.l;
      state.residual = std::numeric_limits<double>::infinity();
      // Re-evaluate from the rounded energies: E is what callers get.
      for (const double e : {e_lo, e_hi}) {
        if (!(e < p.a)) {
          continue;
        }
        try {
          const double r = std::abs(pole_condition(ctx, p, channel, n, e));
          if (r < state.residual) {
            state.residual = r;
            state.energy = e;
          }
        } catch (const domain_error&) {
          // rounded onto the threshold; try the other end
        }
      }
      if (!std::isfinite(state.residual)) {
        return std::nullopt;
      }
      return state;
    }
    prev_kappa = kappa;
    prev_f = f;
  }
  return std::nullopt;
}

std::vector<BoundState> bound_spectrum(const KinematicContext& ctx, const VarshniParams& p,
                                       Channel channel, int n_max) {
  std::vector<BoundState> out;
  for (int n = 0; n <= n_max; ++n) {
    auto state = solve_bound_energy(ctx, p, channel, n);
    if (!state) {
      break;
    }
    out.push_back(*state);
  }
  return out;
}

}  // namespace sscat

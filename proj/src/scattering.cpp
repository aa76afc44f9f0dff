#include "sscat/scattering.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "sscat/errors.hpp"
#include "sscat/specfun.hpp"

namespace sscat {

namespace {

double centrifugal_factor(Channel channel) {
  if (channel.l < 0) {
    throw domain_error("angular momentum must be non-negative");
  }
  return static_cast<double>(channel.l) * (channel.l + 1);
}

// sigma a^2 b^2: the strength of the 1/r^2 piece of sigma V^2.
double sigma_ab2(const KinematicContext& ctx, const VarshniParams& p) {
  const double ab = p.a * p.b;
  return relativistic_coefficient(ctx) * ab * ab;
}

double indicial_exponent(double w3) {
  const double radicand = 0.25 + w3;
  if (radicand < 0.0) {
    throw supercritical_error("1/4 + l(l+1) - sigma a^2 b^2 is negative; no regular solution");
  }
  return 0.5 + std::sqrt(radicand);
}

}  // namespace

double wave_number(const KinematicContext& ctx, const VarshniParams& p, Channel channel) {
  validate(p);
  const double sigma = relativistic_coefficient(ctx);
  const double eps = ctx.energy - p.a;
  const double k2 =
      2.0 * ctx.mu * eps + sigma * eps * eps - centrifugal_factor(channel) * p.beta * p.beta;
  if (k2 < 0.0) {
    throw evanescent_channel_error("closed channel l=" + std::to_string(channel.l) +
                                   ": k^2 = " + std::to_string(k2));
  }
  return std::sqrt(k2);
}

WCoefficients w_coefficients(const KinematicContext& ctx, const VarshniParams& p, Channel channel,
                             double k) {
  validate(p);
  const double sigma = relativistic_coefficient(ctx);
  const double eps = ctx.energy - p.a;
  const double ab = p.a * p.b;
  const double ll1 = centrifugal_factor(channel);
  const double s_ab2 = sigma_ab2(ctx, p);
  const double kb = k / p.beta;
  WCoefficients w;
  w.w1 = 2.0 * ab * (ctx.mu + sigma * eps) / p.beta - s_ab2 - ll1 - kb * kb;
  w.w2 = 2.0 * ab * (ctx.mu + sigma * eps) / p.beta - 2.0 * s_ab2;
  w.w3 = ll1 - s_ab2;
  return w;
}

double transformed_numerator(const WCoefficients& w, double z) {
  return -w.w1 * z * z + w.w2 * z - w.w3;
}

WaveParameters wave_parameters(const KinematicContext& ctx, const VarshniParams& p,
                               Channel channel, CoefficientSet set) {
  const double k = wave_number(ctx, p, channel);
  const WCoefficients w = w_coefficients(ctx, p, channel, k);
  WaveParameters out;
  out.k = k;
  out.w1 = w.w1;
  out.w2 = w.w2;
  out.w3 = w.w3;
  out.lambda = indicial_exponent(w.w3);
  const double root_arg = set == CoefficientSet::repaired ? w.w1 : w.w1 - sigma_ab2(ctx, p);
  out.s = std::sqrt(Complex(root_arg, 0.0));
  const Complex base(out.lambda, -k / p.beta);
  out.eta1 = base - out.s;
  out.eta2 = base + out.s;
  out.eta3 = Complex(2.0 * out.lambda, 0.0);
  return out;
}

namespace {

struct GammaLogs {
  Complex two_ik;  // ln Gamma(2ik/beta)
  Complex eta1c;   // ln Gamma(eta1*)
  Complex eta2c;   // ln Gamma(eta2*)
};

GammaLogs gamma_logs(const WaveParameters& wp, double beta) {
  if (!(wp.k > 0.0)) {
    throw pole_error("Gamma(2ik/beta) has a pole at threshold (k = 0)");
  }
  try {
    return {log_gamma(Complex(0.0, 2.0 * wp.k / beta)), log_gamma(std::conj(wp.eta1)),
            log_gamma(std::conj(wp.eta2))};
  } catch (const pole_error&) {
    throw pole_error("gamma pole at a physical point: a bound state crosses this energy");
  }
}

double normalization_from(const WaveParameters& wp, const GammaLogs& g, NormalizationForm form) {
  const double log_ratio = (g.eta1c + g.eta2c - g.two_ik).real();
  if (form == NormalizationForm::printed) {
    return std::exp(log_ratio) / std::sqrt(wp.eta3.real());
  }
  return std::exp(log_ratio - log_gamma(wp.eta3).real());
}

}  // namespace

double normalization(const KinematicContext& ctx, const VarshniParams& p, Channel channel,
                     NormalizationForm form) {
  const WaveParameters wp = wave_parameters(ctx, p, channel);
  return normalization_from(wp, gamma_logs(wp, p.beta), form);
}

PhaseShiftResult phase_shift(const KinematicContext& ctx, const VarshniParams& p, Channel channel,
                             CoefficientSet set) {
  const WaveParameters wp = wave_parameters(ctx, p, channel, set);
  const GammaLogs g = gamma_logs(wp, p.beta);
  PhaseShiftResult out;
  out.l = channel.l;
  out.k = wp.k;
  out.beta = p.beta;
  out.lambda = wp.lambda;
  out.args = {g.two_ik.imag(), g.eta2c.imag(), g.eta1c.imag()};
  out.delta = 0.5 * std::numbers::pi * (channel.l + 1) + out.args[0] - out.args[1] - out.args[2];
  out.normalization = normalization_from(wp, g, NormalizationForm::amplitude_matched);
  return out;
}

RadialSolution radial_wavefunction(const KinematicContext& ctx, const VarshniParams& p,
                                   Channel channel, const Eigen::Ref<const Eigen::VectorXd>& r_grid,
                                   NormalizationForm form) {
  const WaveParameters wp = wave_parameters(ctx, p, channel);
  const double n = normalization_from(wp, gamma_logs(wp, p.beta), form);
  RadialSolution out;
  out.source = RadialSolution::Source::analytic;
  out.r = r_grid;
  out.psi.resize(r_grid.size());
  Hyp2F1Sweep<double> hyp(wp.eta1, wp.eta2, wp.eta3);
  for (Eigen::Index i = 0; i < r_grid.size(); ++i) {
    const double r = r_grid[i];
    if (!(r > 0.0)) {
      throw domain_error("radial grid must be positive");
    }
    if (i > 0 && !(r > r_grid[i - 1])) {
      throw domain_error("radial grid must be strictly increasing");
    }
    const double x = p.beta * r;
    const double z = -std::expm1(-x);
    const double zc = std::exp(-x);
    const Complex f = hyp(z, zc);
    const Complex plane_wave = std::polar(1.0, wp.k * r);
    out.psi[i] = n * std::exp(wp.lambda * std::log(z)) * plane_wave * f;
  }
  return out;
}

double asymptotic_wavefunction(const PhaseShiftResult& result, Channel channel, double r) {
  return 2.0 * std::sin(result.k * r + result.delta - 0.5 * std::numbers::pi * channel.l);
}

bool in_asymptotic_regime(double beta, double r) { return beta * r >= 3.0; }

}  // namespace sscat

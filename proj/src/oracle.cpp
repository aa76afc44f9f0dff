#include "sscat/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "sscat/errors.hpp"

namespace sscat {

namespace {

constexpr double kStartThreshold = 0.1;  // h^2 |Q| at the first seeded point
constexpr double kRescaleAbove = 1e150;

double indicial_exponent(const KinematicContext& ctx, const VarshniParams& p, Channel channel) {
  const double ab = p.a * p.b;
  const double radicand =
      0.25 + static_cast<double>(channel.l) * (channel.l + 1) - relativistic_coefficient(ctx) * ab * ab;
  if (radicand < 0.0) {
    throw supercritical_error("indicial exponent is complex");
  }
  return 0.5 + std::sqrt(radicand);
}

}  // namespace

void validate(const IntegrationConfig& cfg) {
  if (!(cfg.max_step > 0.0 && cfg.max_step < 0.5)) {
    throw config_error("max_step (k dr bound) must lie in (0, 0.5)");
  }
  if (!(cfg.fit_window > 0.0 && cfg.fit_window < 1.0)) {
    throw config_error("fit_window must lie in (0, 1)");
  }
  if (cfg.r_min && !(*cfg.r_min > 0.0)) {
    throw config_error("r_min must be positive");
  }
  if (cfg.r_min && cfg.r_max && !(*cfg.r_min < *cfg.r_max)) {
    throw config_error("r_min must be below r_max");
  }
}

RadialSolution integrate_radial(const KinematicContext& ctx, const VarshniParams& p,
                                Channel channel, const IntegrationConfig& cfg,
                                CentrifugalMode mode) {
  validate(cfg);
  validate(p);
  const double k = wave_number(ctx, p, channel);
  if (!(k > 0.0)) {
    throw evanescent_channel_error("integration needs an open channel");
  }
  const double h = cfg.max_step / k;
  const double r_min = cfg.r_min.value_or(1e-6 / k);
  const double r_max = cfg.r_max.value_or(std::max(40.0 / k, 25.0 / p.beta));
  if (!(r_max > r_min + 2.0 * h)) {
    throw config_error("integration range shorter than two steps");
  }
  const auto n = static_cast<Eigen::Index>(std::ceil((r_max - r_min) / h)) + 1;

  RadialSolution out;
  out.source = RadialSolution::Source::oracle;
  out.r = Eigen::VectorXd::LinSpaced(n, r_min, r_min + h * static_cast<double>(n - 1));
  Eigen::VectorXd q(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    q[j] = radial_coefficient(ctx, p, channel, out.r[j], mode);
  }
  const double h2 = h * h;
  Eigen::Index start = 0;
  while (start + 1 < n &&
         (h2 * std::abs(q[start]) > kStartThreshold || h2 * std::abs(q[start + 1]) > kStartThreshold)) {
    ++start;
  }
  if (start + 2 >= n) {
    throw config_error("no grid point satisfies the Numerov start condition");
  }

  const double lambda = indicial_exponent(ctx, p, channel);
  auto seed = [&](double r) {
    const double base = mode == CentrifugalMode::approximated ? -std::expm1(-p.beta * r) : r;
    return std::pow(base, lambda);
  };

  std::vector<double> psi(static_cast<std::size_t>(n), 0.0);
  psi[start] = seed(out.r[start]);
  psi[start + 1] = seed(out.r[start + 1]);
  for (Eigen::Index j = start + 1; j + 1 < n; ++j) {
    const double prev = 1.0 + h2 * q[j - 1] / 12.0;
    const double curr = 1.0 - 5.0 * h2 * q[j] / 12.0;
    const double next = 1.0 + h2 * q[j + 1] / 12.0;
    psi[j + 1] = (2.0 * curr * psi[j] - prev * psi[j - 1]) / next;
    if (std::abs(psi[j + 1]) > kRescaleAbove) {
      for (Eigen::Index i = start; i <= j + 1; ++i) {
        psi[i] /= kRescaleAbove;
      }
    }
  }
  out.psi.resize(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    out.psi[j] = Complex(psi[j], 0.0);
  }
  return out;
}

double reduce_mod_pi(double angle) {
  const double pi = std::numbers::pi;
  double reduced = angle - pi * std::round(angle / pi);
  if (reduced <= -0.5 * pi) {
    reduced += pi;
  }
  return reduced;
}

PhaseFit fit_asymptotic(const RadialSolution& sol, double k, Channel channel, double fit_window) {
  if (!(fit_window > 0.0 && fit_window < 1.0)) {
    throw config_error("fit_window must lie in (0, 1)");
  }
  const Eigen::Index n = sol.r.size();
  if (n < 4) {
    throw config_error("too few samples for a phase fit");
  }
  const double r_end = sol.r[n - 1];
  const double r_from = r_end - fit_window * (r_end - sol.r[0]);
  Eigen::Index first = 0;
  while (first < n && sol.r[first] < r_from) {
    ++first;
  }
  const Eigen::Index m = n - first;
  if (m < 4) {
    throw config_error("fit window holds too few samples");
  }
  Eigen::MatrixXd basis(m, 2);
  Eigen::VectorXd values(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const double kr = k * sol.r[first + i];
    basis(i, 0) = std::sin(kr);
    basis(i, 1) = std::cos(kr);
    values[i] = sol.psi[first + i].real();
  }
  const Eigen::Vector2d coef = basis.colPivHouseholderQr().solve(values);
  PhaseFit fit;
  fit.amplitude = coef.norm();
  const double rms = (basis * coef - values).norm() / std::sqrt(static_cast<double>(m));
  fit.relative_rms = fit.amplitude > 0.0 ? rms / fit.amplitude : 1.0;
  // A sin(kr) + B cos(kr) = C sin(kr + phi)
  const double phi = std::atan2(coef[1], coef[0]);
  fit.delta = reduce_mod_pi(phi + 0.5 * std::numbers::pi * channel.l);
  return fit;
}

double analytic_asymptotic_amplitude(const KinematicContext& ctx, const VarshniParams& p,
                                     Channel channel) {
  const double k = wave_number(ctx, p, channel);
  const double r0 = std::max(12.0 / p.beta, 50.0 / k);
  const Eigen::VectorXd r =
      Eigen::VectorXd::LinSpaced(256, r0, r0 + 4.0 * std::numbers::pi / k);
  const RadialSolution sol = radial_wavefunction(ctx, p, channel, r);
  return fit_asymptotic(sol, k, channel, 0.999).amplitude;
}

double extract_phase(const RadialSolution& sol, double k, Channel channel, double fit_window) {
  if (sol.r.size() == 0 || k * sol.r[sol.r.size() - 1] < 30.0) {
    throw asymptotic_regime_error("solution must extend to kr >= 30 for phase extraction");
  }
  const PhaseFit fit = fit_asymptotic(sol, k, channel, fit_window);
  if (fit.relative_rms > 0.01) {
    throw asymptotic_regime_error("sin(kr + phi) fit residual exceeds 1% of the amplitude");
  }
  return fit.delta;
}

Eigen::VectorXd uniform_z_grid(double beta, double z_lo, double z_hi, double dz) {
  if (!(z_lo > 0.0 && z_hi < 1.0 && z_lo < z_hi && dz > 0.0)) {
    throw config_error("uniform z grid needs 0 < z_lo < z_hi < 1 and dz > 0");
  }
  const auto n = static_cast<Eigen::Index>(std::floor((z_hi - z_lo) / dz + 1e-9)) + 1;
  Eigen::VectorXd r(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double z = z_lo + dz * static_cast<double>(i);
    r[i] = -std::log1p(-z) / beta;
  }
  return r;
}

double ode_residual(const RadialSolution& sol, const KinematicContext& ctx, const VarshniParams& p,
                    Channel channel, std::optional<WCoefficients> coefficients) {
  validate(p);
  const Eigen::Index n = sol.r.size();
  if (n < 7) {
    throw config_error("ODE residual needs at least 7 samples");
  }
  Eigen::VectorXd z(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    z[i] = -std::expm1(-p.beta * sol.r[i]);
  }
  const double dz = (z[n - 1] - z[0]) / static_cast<double>(n - 1);
  if (dz > 1e-3 * (1.0 + 1e-9)) {
    throw config_error("grid too coarse for the ODE residual (dz > 1e-3)");
  }
  for (Eigen::Index i = 1; i < n; ++i) {
    if (std::abs((z[i] - z[i - 1]) - dz) > 1e-6 * dz) {
      throw config_error("ODE residual needs samples uniform in z = 1 - e^{-beta r}");
    }
  }
  const WCoefficients w =
      coefficients.value_or(w_coefficients(ctx, p, channel, wave_number(ctx, p, channel)));
  const auto& f = sol.psi;
  double worst = 0.0;
  for (Eigen::Index i = 3; i + 3 < n; ++i) {
    const Complex d1 = (-f[i - 3] + 9.0 * f[i - 2] - 45.0 * f[i - 1] + 45.0 * f[i + 1] -
                        9.0 * f[i + 2] + f[i + 3]) /
                       (60.0 * dz);
    const Complex d2 = (2.0 * f[i - 3] - 27.0 * f[i - 2] + 270.0 * f[i - 1] - 490.0 * f[i] +
                        270.0 * f[i + 1] - 27.0 * f[i + 2] + 2.0 * f[i + 3]) /
                       (180.0 * dz * dz);
    const double zi = z[i];
    const double t = 1.0 - zi;
    const Complex friction = d1 / t;
    const Complex potential = transformed_numerator(w, zi) / (zi * zi * t * t) * f[i];
    const double scale = std::abs(d2) + std::abs(friction) + std::abs(potential);
    if (scale > 0.0) {
      worst = std::max(worst, std::abs(d2 - friction + potential) / scale);
    }
  }
  return worst;
}

double discrete_residual(const RadialSolution& sol, const KinematicContext& ctx,
                         const VarshniParams& p, Channel channel, CentrifugalMode mode) {
  const Eigen::Index n = sol.r.size();
  if (n < 10) {
    throw config_error("discrete residual needs at least 10 samples");
  }
  const double h = sol.r[1] - sol.r[0];
  const double k = wave_number(ctx, p, channel);
  const Eigen::Index first = std::max<Eigen::Index>(n / 2, 2);
  double peak = 0.0;
  for (Eigen::Index i = first; i < n; ++i) {
    peak = std::max(peak, std::abs(sol.psi[i]));
  }
  double worst = 0.0;
  for (Eigen::Index i = first; i + 2 < n; ++i) {
    const Complex d2 = (-sol.psi[i - 2] + 16.0 * sol.psi[i - 1] - 30.0 * sol.psi[i] +
                        16.0 * sol.psi[i + 1] - sol.psi[i + 2]) /
                       (12.0 * h * h);
    const double q = radial_coefficient(ctx, p, channel, sol.r[i], mode);
    worst = std::max(worst, std::abs(d2 + q * sol.psi[i]));
  }
  return worst / (k * k * peak);
}

}  // namespace sscat

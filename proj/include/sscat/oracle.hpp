#pragma once

#include <optional>

#include <Eigen/Core>

#include "sscat/kinematics.hpp"
#include "sscat/potential.hpp"
#include "sscat/scattering.hpp"

namespace sscat {

/// Step and window controls for the Numerov integrator.
///
/// r_min defaults to 1e-6/k. r_max defaults to max(40/k, 25/beta), far enough
/// out that the e^{-beta r} tails no longer move the phase.
struct IntegrationConfig {
  std::optional<double> r_min;
  std::optional<double> r_max;
  double max_step = 0.05;   ///< bound on k * dr
  double fit_window = 0.25;  ///< trailing fraction of the grid used by the phase fit
};

void validate(const IntegrationConfig& cfg);

/// Numerov integration of psi'' + Q(r) psi = 0 outward from the origin, with
/// Q = radial_coefficient(mode). The solution is seeded with (1-e^{-beta r})^lambda
/// (approximated mode) or r^lambda (exact mode) at the first grid point where
/// h^2 |Q| <= 0.1; samples before that are zero.
RadialSolution integrate_radial(const KinematicContext& ctx, const VarshniParams& p,
                                Channel channel, const IntegrationConfig& cfg = {},
                                CentrifugalMode mode = CentrifugalMode::approximated);

struct PhaseFit {
  double delta = 0;          ///< delta_l reduced to (-pi/2, pi/2]
  double amplitude = 0;      ///< fitted amplitude of A sin(kr + phi)
  double relative_rms = 0;   ///< rms fit residual / amplitude
};

/// Least-squares fit of A sin(kr + phi) to Re psi over the trailing window.
PhaseFit fit_asymptotic(const RadialSolution& sol, double k, Channel channel,
                        double fit_window = 0.25);

/// Amplitude of the normalized analytic wavefunction fitted over two periods
/// starting at r = max(12/beta, 50/k), where e^{-beta r} corrections are below 1e-5.
double analytic_asymptotic_amplitude(const KinematicContext& ctx, const VarshniParams& p,
                                     Channel channel);

/// delta_l = phi + l pi/2 modulo pi. Throws asymptotic_regime_error if the fit
/// residual exceeds 1% of the amplitude or the grid ends before kr = 30.
double extract_phase(const RadialSolution& sol, double k, Channel channel,
                     double fit_window = 0.25);

/// Reduces an angle to (-pi/2, pi/2].
double reduce_mod_pi(double angle);

/// Radii whose z = 1 - e^{-beta r} are uniformly spaced on [z_lo, z_hi].
Eigen::VectorXd uniform_z_grid(double beta, double z_lo, double z_hi, double dz);

/// Max relative residual of the transformed equation
///   psi'' - psi'/(1-z) + (-w1 z^2 + w2 z - w3)/(z^2 (1-z)^2) psi = 0
/// on a solution sampled on a uniform z grid (dz <= 1e-3), using sixth-order
/// central differences. `coefficients` overrides the derived (w1, w2, w3).
double ode_residual(const RadialSolution& sol, const KinematicContext& ctx, const VarshniParams& p,
                    Channel channel, std::optional<WCoefficients> coefficients = std::nullopt);

/// Max of |psi''_h + Q psi| / (k^2 max|psi|) over the outer half of a Numerov
/// grid, with psi''_h the five-point second difference. Scales as h^4.
double discrete_residual(const RadialSolution& sol, const KinematicContext& ctx,
                         const VarshniParams& p, Channel channel,
                         CentrifugalMode mode = CentrifugalMode::approximated);

}  // namespace sscat

#pragma once

#include <optional>
#include <vector>

#include "sscat/kinematics.hpp"
#include "sscat/potential.hpp"

namespace sscat {

struct BoundState {
  int n = 0;
  int l = 0;
  double energy = 0;
  double residual = 0;  ///< |pole_condition| at `energy`
};

/// Residual of the S-matrix pole condition at real energy E in a closed
/// channel (k = i kappa, kappa > 0, decaying solution):
///   f(E) = n + lambda + kappa/beta - sqrt(w1(E)),
/// which vanishes where eta1 = lambda - ik/beta - sqrt(w1) reaches -n, i.e. where
/// Gamma(lambda + ik/beta - sqrt(w1)) has its first-order pole and the
/// hypergeometric factor terminates. When w1 < 0 there is no real root and
/// |f| is returned.
double pole_condition(const KinematicContext& ctx, const VarshniParams& p, Channel channel, int n,
                      double energy);

/// 1/|Gamma(lambda + ik/beta - sqrt(w1))| at a closed-channel energy; goes to
/// zero as E approaches a bound state.
double pole_gamma_reciprocal(const KinematicContext& ctx, const VarshniParams& p, Channel channel,
                             double energy);

/// Both sides of k^2 = -beta^2 [((n+lambda)^2 - 2ab(mu + sigma(E-a))/beta + sigma a^2 b^2
/// + l(l+1)) / (2(n+lambda))]^2 at energy E.
struct BoundEnergyEquation {
  double k_squared;
  double rhs;
};

BoundEnergyEquation bound_energy_equation(const KinematicContext& ctx, const VarshniParams& p,
                                          Channel channel, int n, double energy);

/// Bracket scan plus bisection for the n-th state in channel l. Returns
/// nullopt when the well is too shallow to hold it.
std::optional<BoundState> solve_bound_energy(const KinematicContext& ctx, const VarshniParams& p,
                                             Channel channel, int n);

/// All states with n <= n_max for one channel, increasing n.
std::vector<BoundState> bound_spectrum(const KinematicContext& ctx, const VarshniParams& p,
                                       Channel channel, int n_max);

}  // namespace sscat

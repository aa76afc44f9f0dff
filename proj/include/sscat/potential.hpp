#pragma once

#include <Eigen/Core>

#include "sscat/kinematics.hpp"

namespace sscat {

/// V(r) = a [1 - (b/r) exp(-beta r)].
struct VarshniParams {
  double a = 0.15;
  double b = 0.15;
  double beta = 0.05;
};

void validate(const VarshniParams& p);

/// Angular momentum channel.
struct Channel {
  int l = 0;
};

enum class CentrifugalMode {
  exact,         ///< true 1/r and 1/r^2
  approximated,  ///< 1/r -> beta/(1-e^{-beta r}), 1/r^2 -> its square
};

double varshni(const VarshniParams& p, double r);

/// Varshni potential with 1/r replaced by beta/(1 - e^{-beta r}).
double varshni_approximated(const VarshniParams& p, double r);

struct CentrifugalApprox {
  double value;               ///< beta^2 / (1 - e^{-beta r})^2
  double relative_deviation;  ///< value * r^2 - 1
};

CentrifugalApprox centrifugal_approx(double beta, double r);

/// The bracket multiplying psi in psi'' + [...] psi = 0:
/// -l(l+1)/r^2 + 2 mu (E - V) + sigma (E - V)^2.
/// r may be +infinity.
double radial_coefficient(const KinematicContext& ctx, const VarshniParams& p, Channel channel,
                          double r, CentrifugalMode mode);

/// beta * max(r): how far a grid strays from the beta r << 1 regime.
double validity_score(double beta, const Eigen::Ref<const Eigen::VectorXd>& r_grid);

}  // namespace sscat

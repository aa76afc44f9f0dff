#include "sscat/potential.hpp"

#include <cmath>
#include <limits>

#include "sscat/errors.hpp"

namespace sscat {

namespace {

void check_radius(double r) {
  if (!(r > 0.0)) {
    throw domain_error("radius must be positive");
  }
}

void check_channel(Channel channel) {
  if (channel.l < 0) {
    throw domain_error("angular momentum must be non-negative");
  }
}

// 1 - e^{-x} without cancellation for small x.
double one_minus_exp(double x) { return -std::expm1(-x); }

}  // namespace

void validate(const VarshniParams& p) {
  if (!(p.beta > 0.0) || !std::isfinite(p.beta)) {
    throw domain_error("screening parameter beta must be positive");
  }
  if (!std::isfinite(p.a) || !std::isfinite(p.b)) {
    throw domain_error("potential strengths must be finite");
  }
}

double varshni(const VarshniParams& p, double r) {
  check_radius(r);
  if (std::isinf(r)) {
    return p.a;
  }
  return p.a * (1.0 - (p.b / r) * std::exp(-p.beta * r));
}

double varshni_approximated(const VarshniParams& p, double r) {
  check_radius(r);
  if (std::isinf(r)) {
    return p.a;
  }
  const double x = p.beta * r;
  return p.a * (1.0 - p.b * p.beta * std::exp(-x) / one_minus_exp(x));
}

CentrifugalApprox centrifugal_approx(double beta, double r) {
  check_radius(r);
  if (std::isinf(r)) {
    return {beta * beta, std::numeric_limits<double>::infinity()};
  }
  const double z = one_minus_exp(beta * r);
  const double value = beta * beta / (z * z);
  return {value, value * r * r - 1.0};
}

double radial_coefficient(const KinematicContext& ctx, const VarshniParams& p, Channel channel,
                          double r, CentrifugalMode mode) {
  check_channel(channel);
  const double sigma = relativistic_coefficient(ctx);
  const double ll1 = static_cast<double>(channel.l) * (channel.l + 1);
  double centrifugal;
  double v;
  if (mode == CentrifugalMode::exact) {
    v = varshni(p, r);
    centrifugal = std::isinf(r) ? 0.0 : ll1 / (r * r);
  } else {
    v = varshni_approximated(p, r);
    centrifugal = ll1 * centrifugal_approx(p.beta, r).value;
  }
  const double kinetic = ctx.energy - v;
  return -centrifugal + 2.0 * ctx.mu * kinetic + sigma * kinetic * kinetic;
}

double validity_score(double beta, const Eigen::Ref<const Eigen::VectorXd>& r_grid) {
  if (r_grid.size() == 0) {
    return 0.0;
  }
  return beta * r_grid.maxCoeff();
}

}  // namespace sscat

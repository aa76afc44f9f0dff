#include "sscat/kinematics.hpp"

#include <cmath>
#include <string>

#include "sscat/errors.hpp"

namespace sscat {

namespace {

void check_masses(const TwoBodyMasses& masses) {
  if (!(masses.m1 > 0.0) || !(masses.m2 > 0.0) || !std::isfinite(masses.m1) ||
      !std::isfinite(masses.m2)) {
    throw domain_error("masses must be positive and finite (m1=" + std::to_string(masses.m1) +
                       ", m2=" + std::to_string(masses.m2) + ")");
  }
}

}  // namespace

double reduced_mass(const TwoBodyMasses& masses) {
  check_masses(masses);
  return masses.m1 * masses.m2 / (masses.m1 + masses.m2);
}

double mass_index(const TwoBodyMasses& masses) {
  const double mu = reduced_mass(masses);
  const double product = masses.m1 * masses.m2;
  return mu * std::cbrt(product / (product - 3.0 * mu * mu));
}

double relativistic_coefficient(const KinematicContext& ctx) {
  if (ctx.sigma_override) {
    if (!(*ctx.sigma_override > 0.0)) {
      throw domain_error("sigma override must be positive");
    }
    return *ctx.sigma_override;
  }
  return ctx.sigma;
}

KinematicContext make_context(const TwoBodyMasses& masses, double energy,
                              std::optional<double> sigma_override) {
  KinematicContext ctx;
  ctx.masses = masses;
  ctx.mu = reduced_mass(masses);
  ctx.eta = mass_index(masses);
  // Algebraically equal to (mu/eta)^3 but without the cube-root round trip.
  const double m1m2 = masses.m1 * masses.m2;
  ctx.sigma = 1.0 - 3.0 * ctx.mu * ctx.mu / m1m2;
  if (!std::isfinite(energy)) {
    throw domain_error("energy must be finite");
  }
  ctx.energy = energy;
  ctx.sigma_override = sigma_override;
  relativistic_coefficient(ctx);  // validates the override
  return ctx;
}

KinematicContext preset_context(MassPreset preset, double energy) {
  switch (preset) {
    case MassPreset::equal:
      return make_context({1.0, 1.0}, energy, 0.25);
    case MassPreset::unequal:
      return make_context({99.0, 1.0}, energy, 1.0);
  }
  throw domain_error("unknown mass preset");
}

}  // namespace sscat

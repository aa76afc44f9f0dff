#pragma once

#include <optional>

namespace sscat {

/// Rest masses of the two particles, natural units (hbar = c = 1).
struct TwoBodyMasses {
  double m1 = 1.0;
  double m2 = 1.0;
};

/// Everything the radial equation needs about the two-body kinematics.
///
/// `sigma` is (mu/eta)^3 = 1 - 3 mu^2 / (m1 m2), which lies in [1/4, 1).
/// When `sigma_override` is set it replaces `sigma` in every downstream
/// formula (see relativistic_coefficient()).
struct KinematicContext {
  TwoBodyMasses masses;
  double mu = 0.5;
  double eta = 0.0;
  double sigma = 0.25;
  double energy = 1.0;
  std::optional<double> sigma_override;
};

double reduced_mass(const TwoBodyMasses& masses);

/// eta = mu [m1 m2 / (m1 m2 - 3 mu^2)]^(1/3).
double mass_index(const TwoBodyMasses& masses);

/// The coefficient of (E - V)^2 in the radial equation.
double relativistic_coefficient(const KinematicContext& ctx);

/// Validates the masses and override and fills the derived fields.
KinematicContext make_context(const TwoBodyMasses& masses, double energy,
                              std::optional<double> sigma_override = std::nullopt);

/// The two mass combinations of the reference phase-shift table.
enum class MassPreset {
  equal,    ///< m1 = m2 = 1, sigma = 1/4
  unequal,  ///< m1 = 99, m2 = 1, sigma overridden to 1
};

KinematicContext preset_context(MassPreset preset, double energy);

}  // namespace sscat

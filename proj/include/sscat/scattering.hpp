#pragma once

#include <array>
#include <complex>

#include <Eigen/Core>

#include "sscat/kinematics.hpp"
#include "sscat/potential.hpp"

namespace sscat {

using Complex = std::complex<double>;

/// Coefficients of the equation in z = 1 - e^{-beta r}:
///   psi'' - psi'/(1-z) + (-w1 z^2 + w2 z - w3) / (z^2 (1-z)^2) psi = 0.
struct WCoefficients {
  double w1 = 0;
  double w2 = 0;
  double w3 = 0;
};

/// `repaired` is the set derived from the radial equation itself.
/// `printed` puts a doubled sigma a^2 b^2 term under the root of eta1,2, the
/// other form in circulation; it exists for comparison only.
enum class CoefficientSet { repaired, printed };

/// Parameters of the hypergeometric factor 2F1(eta1, eta2; eta3; z).
struct WaveParameters {
  double lambda = 0;  ///< indicial exponent at r = 0, >= 1/2
  Complex eta1;
  Complex eta2;
  Complex eta3;
  double k = 0;  ///< asymptotic wave number
  double w1 = 0;
  double w2 = 0;
  double w3 = 0;
  Complex s;  ///< sqrt(w1), principal branch; eta1,2 = lambda - i k/beta -/+ s
};

struct PhaseShiftResult {
  int l = 0;
  double delta = 0;  ///< radians, continuous branch (not reduced)
  double k = 0;
  double beta = 0;
  double lambda = 0;
  double normalization = 0;
  /// arg Gamma(2ik/beta), arg Gamma(eta2*), arg Gamma(eta1*).
  std::array<double, 3> args{};
};

enum class NormalizationForm {
  amplitude_matched,  ///< asymptotic amplitude exactly 2
  printed,            ///< 1/sqrt(eta3) prefactor instead of 1/Gamma(eta3)
};

/// Sampled radial function psi(r) = r R(r).
struct RadialSolution {
  enum class Source { analytic, oracle };
  Eigen::VectorXd r;
  Eigen::VectorXcd psi;
  Source source = Source::analytic;
};

/// k = sqrt(2 mu (E-a) + sigma (E-a)^2 - l(l+1) beta^2). Zero at threshold.
double wave_number(const KinematicContext& ctx, const VarshniParams& p, Channel channel);

WCoefficients w_coefficients(const KinematicContext& ctx, const VarshniParams& p, Channel channel,
                             double k);

/// -w1 z^2 + w2 z - w3.
double transformed_numerator(const WCoefficients& w, double z);

WaveParameters wave_parameters(const KinematicContext& ctx, const VarshniParams& p,
                               Channel channel,
                               CoefficientSet set = CoefficientSet::repaired);

double normalization(const KinematicContext& ctx, const VarshniParams& p, Channel channel,
                     NormalizationForm form = NormalizationForm::amplitude_matched);

PhaseShiftResult phase_shift(const KinematicContext& ctx, const VarshniParams& p, Channel channel,
                             CoefficientSet set = CoefficientSet::repaired);

/// psi(r) = N (1 - e^{-beta r})^lambda e^{ikr} 2F1(eta1, eta2; eta3; 1 - e^{-beta r}).
RadialSolution radial_wavefunction(const KinematicContext& ctx, const VarshniParams& p,
                                   Channel channel, const Eigen::Ref<const Eigen::VectorXd>& r_grid,
                                   NormalizationForm form = NormalizationForm::amplitude_matched);

/// 2 sin(kr + delta_l - l pi / 2).
double asymptotic_wavefunction(const PhaseShiftResult& result, Channel channel, double r);

/// beta r >= 3; below this the asymptotic form is only indicative.
bool in_asymptotic_regime(double beta, double r);

}  // namespace sscat

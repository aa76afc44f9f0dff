#include <doctest.h>

#include <cmath>
#include <numbers>

#include "sscat/errors.hpp"
#include "sscat/oracle.hpp"
#include "sscat/scattering.hpp"

using namespace sscat;

namespace {

constexpr double pi = std::numbers::pi;
const VarshniParams kTable{0.15, 0.15, 0.05};

KinematicContext equal_ctx() { return preset_context(MassPreset::equal, 1.0); }

RadialSolution synthetic(double k, double delta, int l, double scale) {
  RadialSolution sol;
  sol.source = RadialSolution::Source::oracle;
  sol.r = Eigen::VectorXd::LinSpaced(4000, 1.0, 60.0 / k);
  sol.psi.resize(sol.r.size());
  for (Eigen::Index i = 0; i < sol.r.size(); ++i) {
    sol.psi[i] = scale * 2.0 * std::sin(k * sol.r[i] + delta - 0.5 * pi * l);
  }
  return sol;
}

}  // namespace

TEST_CASE("reduce_mod_pi") {
  CHECK(reduce_mod_pi(0.3) == doctest::Approx(0.3));
  CHECK(reduce_mod_pi(0.3 + 7 * pi) == doctest::Approx(0.3));
  CHECK(reduce_mod_pi(-0.5 * pi) == doctest::Approx(0.5 * pi));
  CHECK(reduce_mod_pi(0.5 * pi) == doctest::Approx(0.5 * pi));
}

TEST_CASE("configuration checks") {
  IntegrationConfig cfg;
  CHECK_NOTHROW(validate(cfg));
  cfg.max_step = 0.7;
  CHECK_THROWS_AS(validate(cfg), config_error);
  cfg = {};
  cfg.fit_window = 1.0;
  CHECK_THROWS_AS(validate(cfg), config_error);
  cfg = {};
  cfg.r_min = 5.0;
  cfg.r_max = 1.0;
  CHECK_THROWS_AS(validate(cfg), config_error);
  CHECK_THROWS_AS(uniform_z_grid(0.05, 0.5, 0.2, 1e-3), config_error);
}

TEST_CASE("free particle solution is sin(kr)") {
  const auto ctx = equal_ctx();
  const VarshniParams p{0.0, 0.15, 0.05};
  const double k = wave_number(ctx, p, {0});
  IntegrationConfig cfg;
  cfg.r_max = 40.0 / k;
  cfg.max_step = 0.01;
  const auto sol = integrate_radial(ctx, p, {0}, cfg);
  // scale from the first quarter period, deviation read at kr = 20
  Eigen::Index i_ref = 0, i_20 = 0;
  while (k * sol.r[i_ref] < 0.5 * pi) ++i_ref;
  while (k * sol.r[i_20] < 20.0) ++i_20;
  const double scale = sol.psi[i_ref].real() / std::sin(k * sol.r[i_ref]);
  const double want = scale * std::sin(k * sol.r[i_20]);
  CHECK(std::abs(sol.psi[i_20].real() - want) < 1e-6 * std::abs(scale));
  CHECK(std::abs(extract_phase(sol, k, {0})) < 1e-6);
}

TEST_CASE("Numerov discrete residual converges at fourth order") {
  const auto ctx = equal_ctx();
  for (int l : {0, 2}) {
    IntegrationConfig coarse, fine;
    coarse.max_step = 0.05;
    fine.max_step = 0.025;
    const double r1 = discrete_residual(integrate_radial(ctx, kTable, {l}, coarse), ctx, kTable, {l});
    const double r2 = discrete_residual(integrate_radial(ctx, kTable, {l}, fine), ctx, kTable, {l});
    INFO("l=" << l << " ratio=" << r1 / r2);
    CHECK(r1 / r2 >= 12.0);
    CHECK(r1 / r2 <= 20.0);
  }
}

TEST_CASE("Numerov solution matches the analytic one up to scale") {
  const auto ctx = equal_ctx();
  // l = 20 at beta = 0.045 is centrifugal dominated: the connection terms
  // cancel near z = 1/2 and hyp2f1 has to switch routes
  const std::pair<double, int> cases[] = {{0.05, 1}, {0.045, 20}};
  for (auto [beta, l] : cases) {
    VarshniParams p = kTable;
    p.beta = beta;
    const auto num = integrate_radial(ctx, p, {l});
    Eigen::Index start = 0;
    while (num.psi[start].real() == 0.0) ++start;
    const Eigen::Index n = num.r.size() - start;
    const Eigen::VectorXd r = num.r.segment(start, n);
    const Eigen::VectorXd psi_n = num.psi.segment(start, n).real();
    const Eigen::VectorXd psi_a = radial_wavefunction(ctx, p, {l}, r).psi.real();
    const double c = psi_a.dot(psi_n) / psi_n.squaredNorm();
    INFO("beta=" << beta << " l=" << l);
    CHECK((psi_a - c * psi_n).norm() / psi_a.norm() < 1e-4);
  }
}

TEST_CASE("extract_phase on synthetic samples") {
  for (int l : {0, 1, 4}) {
    CHECK(extract_phase(synthetic(1.3, 0.3, l, 1.0), 1.3, {l}) == doctest::Approx(0.3).epsilon(1e-10));
  }
  // amplitude is a free parameter
  const double base = extract_phase(synthetic(0.9, -1.1, 2, 1.0), 0.9, {2});
  CHECK(extract_phase(synthetic(0.9, -1.1, 2, 1e-7), 0.9, {2}) == doctest::Approx(base).epsilon(1e-12));
  CHECK(extract_phase(synthetic(0.9, -1.1, 2, -3e5), 0.9, {2}) == doctest::Approx(base).epsilon(1e-12));
  const auto fit = fit_asymptotic(synthetic(0.9, -1.1, 2, 3.0), 0.9, {2});
  CHECK(fit.amplitude == doctest::Approx(6.0).epsilon(1e-10));
  CHECK(fit.relative_rms < 1e-10);
}

TEST_CASE("extract_phase rejects poor data") {
  auto short_grid = synthetic(1.0, 0.2, 0, 1.0);
  short_grid.r = Eigen::VectorXd::LinSpaced(short_grid.r.size(), 0.1, 20.0);
  CHECK_THROWS_AS(extract_phase(short_grid, 1.0, {0}), asymptotic_regime_error);
  auto noisy = synthetic(1.0, 0.2, 0, 1.0);
  for (Eigen::Index i = 0; i < noisy.psi.size(); i += 2) noisy.psi[i] += 0.5;
  CHECK_THROWS_AS(extract_phase(noisy, 1.0, {0}), asymptotic_regime_error);
}

TEST_CASE("Numerov phase agrees with the analytic phase modulo pi") {
  const auto ctx = equal_ctx();
  for (int l = 0; l <= 5; ++l) {
    const auto analytic = phase_shift(ctx, kTable, {l});
    const double numeric = extract_phase(integrate_radial(ctx, kTable, {l}), analytic.k, {l});
    CHECK(std::abs(reduce_mod_pi(analytic.delta - numeric)) < 2e-3);
  }
}

TEST_CASE("transformed equation residual certifies the coefficients") {
  const auto ctx = equal_ctx();
  const Channel ch{1};
  const double k = wave_number(ctx, kTable, ch);
  const auto grid = uniform_z_grid(kTable.beta, 0.01, 0.8, 5e-4);
  const auto sol = radial_wavefunction(ctx, kTable, ch, grid);
  const double clean = ode_residual(sol, ctx, kTable, ch);
  CHECK(clean < 1e-6);
  auto w = w_coefficients(ctx, kTable, ch, k);
  w.w2 *= 1.01;
  CHECK(ode_residual(sol, ctx, kTable, ch, w) > 10.0 * clean);

  const VarshniParams free{0.0, 0.15, 0.05};
  const auto free_sol = radial_wavefunction(ctx, free, ch, grid);
  CHECK(ode_residual(free_sol, ctx, free, ch) < clean);
}

TEST_CASE("residual grid checks") {
  const auto ctx = equal_ctx();
  const auto coarse = uniform_z_grid(kTable.beta, 0.01, 0.8, 2e-3);
  CHECK_THROWS_AS(ode_residual(radial_wavefunction(ctx, kTable, {0}, coarse), ctx, kTable, {0}),
                  config_error);
  const Eigen::VectorXd uniform_r = Eigen::VectorXd::LinSpaced(4000, 1.0, 20.0);
  CHECK_THROWS_AS(ode_residual(radial_wavefunction(ctx, kTable, {0}, uniform_r), ctx, kTable, {0}),
                  config_error);
}

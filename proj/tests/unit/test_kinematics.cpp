#include <doctest.h>

#include <cmath>

#include "sscat/errors.hpp"
#include "sscat/kinematics.hpp"

using namespace sscat;

TEST_CASE("reduced mass and mass index") {
  CHECK(reduced_mass({1.0, 1.0}) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(reduced_mass({99.0, 1.0}) == doctest::Approx(0.99).epsilon(1e-15));
  // mpmath, 30 digits
  CHECK(std::abs(mass_index({1.0, 1.0}) - 0.793700525984099737) < 1e-15);
  CHECK(std::abs(mass_index({99.0, 1.0}) - 0.999999656463518592) < 1e-15);
}

TEST_CASE("sigma is (mu/eta)^3 and lies in [1/4, 1)") {
  for (auto masses : {TwoBodyMasses{1, 1}, TwoBodyMasses{99, 1}, TwoBodyMasses{3, 0.2},
                      TwoBodyMasses{1e-3, 1e3}}) {
    const auto ctx = make_context(masses, 1.0);
    CHECK(ctx.sigma == doctest::Approx(std::pow(ctx.mu / ctx.eta, 3)).epsilon(1e-13));
    CHECK(ctx.sigma >= 0.25 - 1e-15);
    CHECK(ctx.sigma < 1.0);
  }
  CHECK(make_context({99, 1}, 1.0).sigma == doctest::Approx(0.9703).epsilon(1e-14));
}

TEST_CASE("symmetric in the two masses") {
  const auto a = make_context({7.0, 0.3}, 1.0);
  const auto b = make_context({0.3, 7.0}, 1.0);
  CHECK(a.mu == b.mu);
  CHECK(a.eta == doctest::Approx(b.eta).epsilon(1e-15));
  CHECK(a.sigma == b.sigma);
}

TEST_CASE("override replaces sigma downstream") {
  const auto ctx = make_context({1, 1}, 1.0, 0.7);
  CHECK(ctx.sigma == doctest::Approx(0.25));
  CHECK(relativistic_coefficient(ctx) == 0.7);
  CHECK(relativistic_coefficient(make_context({1, 1}, 1.0)) == doctest::Approx(0.25));
}

TEST_CASE("presets") {
  const auto eq = preset_context(MassPreset::equal, 1.0);
  CHECK(eq.masses.m1 == 1.0);
  CHECK(relativistic_coefficient(eq) == 0.25);
  const auto uneq = preset_context(MassPreset::unequal, 2.0);
  CHECK(uneq.masses.m1 == 99.0);
  CHECK(uneq.energy == 2.0);
  CHECK(relativistic_coefficient(uneq) == 1.0);
}

TEST_CASE("invalid input") {
  CHECK_THROWS_AS(reduced_mass({0.0, 1.0}), domain_error);
  CHECK_THROWS_AS(mass_index({1.0, -2.0}), domain_error);
  CHECK_THROWS_AS(make_context({NAN, 1.0}, 1.0), domain_error);
  CHECK_THROWS_AS(make_context({1.0, 1.0}, 1.0, 0.0), domain_error);
  CHECK_THROWS_AS(make_context({1.0, 1.0}, INFINITY), domain_error);
}

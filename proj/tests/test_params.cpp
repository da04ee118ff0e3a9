#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "core/constants.hpp"
#include "core/params.hpp"
#include "test_common.hpp"

using dtebell::DerivedScales;
using dtebell::DteParams;
using dtebell::kHbar;

TEST_CASE("coherent unit choices give unit dispersion times") {
  // sigma_p_cm^2 = 2 m hbar  =>  T_cm = 1 s
  const DteParams cm(1.0, 1.0, std::sqrt(2.0 * kHbar), 1e-3, 0.0, 0.0);
  CHECK(cm.t_cm() == doctest::Approx(1.0).epsilon(1e-14));

  // sigma_p_rel^2 = m hbar / 2  =>  T_rel = 1 s
  const DteParams rel(1.0, 1.0, 1e-3, std::sqrt(0.5 * kHbar), 0.0, 0.0);
  CHECK(rel.t_rel() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("lithium-like scenario reduced wavelength") {
  // m = 9.988e-27 kg, v_rel = 2e-2 m/s: lambdabar = 2 hbar/(m v_rel)
  const DteParams params(9.988e-27, 2e-2, 1e-30, 5e-31, 1.0, 0.0);
  const double expected = 2.0 * kHbar / (9.988e-27 * 2e-2);
  CHECK(params.lambdabar_rel() == doctest::Approx(expected).epsilon(1e-15));
  CHECK(params.lambdabar_rel() == doctest::Approx(1.056e-6).epsilon(1e-3));
}

TEST_CASE("derived_scales returns the exact defining expressions") {
  const DteParams params(3.2e-27, 0.013, 2.5e-30, 7e-31, 0.4, 0.3);
  const DerivedScales scales = derived_scales(params);
  CHECK(scales.t_cm == 2.0 * params.mass() * kHbar /
                           (params.sigma_p_cm() * params.sigma_p_cm()));
  CHECK(scales.t_rel == params.mass() * kHbar /
                            (2.0 * params.sigma_p_rel() * params.sigma_p_rel()));
  CHECK(scales.lambdabar_rel == 2.0 * kHbar / (params.mass() * params.v_rel()));
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(DteParams(0.0, 1.0, 1.0, 1.0, 0.0, 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(DteParams(1.0, -1.0, 1.0, 1.0, 0.0, 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(DteParams(1.0, 1.0, 0.0, 1.0, 0.0, 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(DteParams(1.0, 1.0, 1.0, -2.0, 0.0, 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(DteParams(1.0, 1.0, 1.0, 1.0, -0.5, 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(DteParams(1.0, 1.0, 1.0, 1.0, 0.0, NAN),
                  std::invalid_argument);
}

TEST_CASE("doubling a momentum spread divides its dispersion time by four") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 200; ++i) {
    const double mass = testutil::uniform(rng, 1e-27, 1e-25);
    const double sigma_cm = testutil::uniform(rng, 1e-32, 1e-29);
    const double sigma_rel = testutil::uniform(rng, 1e-32, 1e-29);
    const DteParams base(mass, 0.01, sigma_cm, sigma_rel, 0.0, 0.0);
    const DteParams doubled(mass, 0.01, 2.0 * sigma_cm, 2.0 * sigma_rel, 0.0,
                            0.0);
    CHECK(doubled.t_cm() == doctest::Approx(base.t_cm() / 4.0).epsilon(1e-14));
    CHECK(doubled.t_rel() ==
          doctest::Approx(base.t_rel() / 4.0).epsilon(1e-14));
  }
}

TEST_CASE("lambdabar times p0 is hbar to machine precision") {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 200; ++i) {
    const DteParams params(testutil::uniform(rng, 1e-27, 1e-25),
                           testutil::uniform(rng, 1e-3, 1.0), 1e-30, 1e-30,
                           0.0, 0.0);
    CHECK(params.lambdabar_rel() * params.p0_rel() ==
          doctest::Approx(kHbar).epsilon(1e-15));
  }
}

TEST_CASE("switch distinguishability") {
  SUBCASE("zero delay means zero separation") {
    const DteParams params(9.988e-27, 2e-2, 1e-30, 5e-31, 0.0, 0.0);
    CHECK(dtebell::switch_distinguishability(params, 1.0) == 0.0);
  }

  SUBCASE("ratio is one when the initial width equals the separation") {
    // Pick sigma_p_rel so that sigma_x0 = hbar/(2 sigma_p) = (v/2) tau.
    const double v = 2e-2;
    const double tau = 1.0;
    const double separation = 0.5 * v * tau;
    const double sigma_p = kHbar / (2.0 * separation);
    const DteParams params(9.988e-27, v, 1e-30, sigma_p, tau, 0.0);
    CHECK(dtebell::switch_distinguishability(params, 0.0) ==
          doctest::Approx(1.0).epsilon(1e-14));
  }

  SUBCASE("lithium-like scenario, dispersed width at one second") {
    const double mass = 9.988e-27;
    const double sigma_p = 5e-31;
    const DteParams params(mass, 2e-2, 1e-30, sigma_p, 1.0, 0.0);
    // Hand evaluation of s/sigma_x(t).
    const double s = 0.5 * 2e-2 * 1.0;
    const double sigma_x0 = kHbar / (2.0 * sigma_p);
    const double t_disp = mass * kHbar / (2.0 * sigma_p * sigma_p);
    const double sigma_x = sigma_x0 * std::sqrt(1.0 + 1.0 / (t_disp * t_disp));
    CHECK(dtebell::switch_distinguishability(params, 1.0) ==
          doctest::Approx(s / sigma_x).epsilon(1e-14));
    CHECK(dtebell::switch_distinguishability(params, 1.0) > 10.0);
  }

  SUBCASE("negative arrival time is rejected") {
    const DteParams params(9.988e-27, 2e-2, 1e-30, 5e-31, 1.0, 0.0);
    CHECK_THROWS_AS(dtebell::switch_distinguishability(params, -1.0),
                    std::invalid_argument);
  }
}

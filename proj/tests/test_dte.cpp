#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "core/constants.hpp"
#include "core/dte.hpp"
#include "core/errors.hpp"
#include "core/params.hpp"
#include "test_common.hpp"

using dtebell::DteParams;
using dtebell::DteProbabilityBreakdown;
using dtebell::DteSettings;
using dtebell::FringeSample;
using dtebell::kHbar;
using dtebell::kPi;
using dtebell::PortOutcome;

namespace {

// Lithium-like pair (m ~ 6 u, v_rel = 2 cm/s) with the dispersion ratios
// tau/T_cm and tau/T_rel dialed in directly.
DteParams make_params(double tau, double ratio_cm, double ratio_rel,
                      double phi_tau = 0.0) {
  const double mass = 9.988e-27;
  const double v_rel = 2e-2;
  const double t_cm = ratio_cm > 0.0 ? tau / ratio_cm : 1e9;
  const double t_rel = ratio_rel > 0.0 ? tau / ratio_rel : 1e9;
  const double sigma_cm = std::sqrt(2.0 * mass * kHbar / t_cm);
  const double sigma_rel = std::sqrt(mass * kHbar / (2.0 * t_rel));
  return DteParams(mass, v_rel, sigma_cm, sigma_rel, tau, phi_tau);
}

}  // namespace

TEST_CASE("all dispersion and mismatch terms vanish at tau = 0, ell = 0") {
  const DteParams params = make_params(0.0, 0.0, 0.0);
  const DteProbabilityBreakdown breakdown = dte_probability_gaussian(
      params, DteSettings(0.0, 0.0), PortOutcome(+1, +1));
  CHECK(breakdown.modulation_amplitude == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(breakdown.cosine_argument == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(breakdown.phi0 == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(breakdown.total == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("matched point at tau = T_cm = T_rel gives amplitude 2^(-1/2)") {
  const double tau = 1.0;
  const DteParams params = make_params(tau, 1.0, 1.0);
  const double matched_diff = tau * params.v_rel();
  const DteSettings settings(0.5 * matched_diff, -0.5 * matched_diff);
  const DteProbabilityBreakdown breakdown =
      dte_probability_gaussian(params, settings, PortOutcome(+1, +1));
  CHECK(breakdown.modulation_amplitude ==
        doctest::Approx(std::pow(2.0, -0.5)).epsilon(1e-12));
}

TEST_CASE("cosine argument pi/2 flattens every outcome to 1/4") {
  const DteParams params = make_params(0.0, 0.0, 0.0);
  // tau = 0, phi_tau = 0: argument = (ell1 - ell2)/lambdabar.
  const double ell1 = 0.5 * kPi * params.lambdabar_rel();
  for (const PortOutcome& outcome : PortOutcome::all()) {
    const DteProbabilityBreakdown breakdown =
        dte_probability_gaussian(params, DteSettings(ell1, 0.0), outcome);
    CHECK(breakdown.cosine_argument == doctest::Approx(0.5 * kPi).epsilon(1e-12));
    CHECK(breakdown.total == doctest::Approx(0.25).epsilon(1e-12));
  }
}

TEST_CASE("breakdown fields compose into the total") {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 200; ++i) {
    const DteParams params =
        make_params(testutil::uniform(rng, 0.01, 2.0),
                    testutil::uniform(rng, 0.1, 3.0),
                    testutil::uniform(rng, 0.1, 3.0),
                    testutil::uniform(rng, -kPi, kPi));
    const double scale = params.tau() * params.v_rel() + params.lambdabar_rel();
    const DteSettings settings(testutil::uniform(rng, -scale, scale),
                               testutil::uniform(rng, -scale, scale));
    for (const PortOutcome& outcome : PortOutcome::all()) {
      const DteProbabilityBreakdown b =
          dte_probability_gaussian(params, settings, outcome);
      CHECK(b.modulation_amplitude >= 0.0);
      CHECK(b.modulation_amplitude <= 1.0);
      CHECK(b.total ==
            doctest::Approx(0.25 * (1.0 + outcome.parity() *
                                              b.modulation_amplitude *
                                              std::cos(b.cosine_argument)))
                .epsilon(1e-15));
    }
  }
}

TEST_CASE("outcome probabilities normalize and depend only on the parity") {
  std::mt19937_64 rng(32);
  for (int i = 0; i < 200; ++i) {
    const DteParams params =
        make_params(testutil::uniform(rng, 0.01, 3.0),
                    testutil::uniform(rng, 0.1, 2.5),
                    testutil::uniform(rng, 0.1, 2.5),
                    testutil::uniform(rng, -kPi, kPi));
    const double scale =
        params.tau() * params.v_rel() + 10.0 * params.lambdabar_rel();
    const DteSettings settings(testutil::uniform(rng, -scale, scale),
                               testutil::uniform(rng, -scale, scale));
    const double p_pp =
        dte_probability_gaussian(params, settings, PortOutcome(+1, +1)).total;
    const double p_pm =
        dte_probability_gaussian(params, settings, PortOutcome(+1, -1)).total;
    const double p_mp =
        dte_probability_gaussian(params, settings, PortOutcome(-1, +1)).total;
    const double p_mm =
        dte_probability_gaussian(params, settings, PortOutcome(-1, -1)).total;
    CHECK(p_pp == p_mm);  // exact: same parity
    CHECK(p_pm == p_mp);
    CHECK(p_pp + p_pm + p_mp + p_mm == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("asymmetric splitters are rejected, not extrapolated") {
  const DteParams params = make_params(1.0, 0.5, 0.5);
  const DteSettings settings(0.0, 0.0, 0.3, DteSettings::kQuarterPi);
  CHECK_THROWS_AS(
      dte_probability_gaussian(params, settings, PortOutcome(+1, +1)),
      dtebell::UnsupportedSplittingError);
}

TEST_CASE("visibility examples") {
  SUBCASE("perfect at tau = 0 and matched offsets") {
    const DteParams params = make_params(0.0, 0.0, 0.0);
    CHECK(dtebell::dte_visibility(params, 0.0, 0.0) ==
          doctest::Approx(1.0).epsilon(1e-14));
  }

  SUBCASE("pure Lorentzian at the matched envelope") {
    const double tau = 1.0;
    const double r_cm = 0.8;
    const double r_rel = 1.7;
    const DteParams params = make_params(tau, r_cm, r_rel);
    const double expected = std::pow(1.0 + r_cm * r_cm, -0.25) *
                            std::pow(1.0 + r_rel * r_rel, -0.25);
    CHECK(dtebell::dte_visibility(params, 0.0, tau * params.v_rel()) ==
          doctest::Approx(expected).epsilon(1e-12));
  }

  SUBCASE("large envelope mismatch kills the fringes") {
    const DteParams params = make_params(1.0, 0.5, 0.5);
    CHECK(dtebell::dte_visibility(params, 1.0, params.tau() * params.v_rel()) ==
          doctest::Approx(0.0).epsilon(1e-12));
  }
}

TEST_CASE("visibility degrades monotonically with envelope mismatch") {
  const DteParams params = make_params(1.0, 0.7, 1.2);
  const double matched = params.tau() * params.v_rel();
  const double width =
      std::sqrt(2.0 * params.v_rel() * params.lambdabar_rel() * params.t_rel());
  double previous = dtebell::dte_visibility(params, 0.0, matched);
  for (int i = 1; i <= 50; ++i) {
    const double v =
        dtebell::dte_visibility(params, 0.0, matched + 0.2 * i * width);
    CHECK(v <= previous + 1e-15);
    previous = v;
  }
  previous = dtebell::dte_visibility(params, 0.0, matched);
  for (int i = 1; i <= 50; ++i) {
    const double v =
        dtebell::dte_visibility(params, 0.2 * i * width, matched);
    CHECK(v <= previous + 1e-15);
    previous = v;
  }
}

TEST_CASE("time-bin limit: small offsets reduce to the ideal fringe law") {
  // tau = 0 and offsets far below the envelope scales: the probability must
  // approach (1/4)[1 + parity cos((ell1-ell2)/lambdabar - phi0/2)].
  const double phi_tau = 0.6;
  const DteParams params = make_params(0.0, 0.0, 0.0, phi_tau);
  std::mt19937_64 rng(33);
  for (int i = 0; i < 100; ++i) {
    const double ell1 =
        testutil::uniform(rng, -3.0, 3.0) * params.lambdabar_rel();
    const double ell2 =
        testutil::uniform(rng, -3.0, 3.0) * params.lambdabar_rel();
    for (const PortOutcome& outcome : PortOutcome::all()) {
      const double actual =
          dte_probability_gaussian(params, DteSettings(ell1, ell2), outcome)
              .total;
      const double ideal =
          0.25 * (1.0 + outcome.parity() *
                            std::cos((ell1 - ell2) / params.lambdabar_rel() -
                                     phi_tau));
      CHECK(actual == doctest::Approx(ideal).epsilon(1e-9).scale(1.0));
    }
  }
}

TEST_CASE("fringe scan basics") {
  const DteParams params = make_params(1.0, 0.5, 0.5);
  const double matched = params.tau() * params.v_rel();

  SUBCASE("two-point scan rows are normalized") {
    const auto rows = dtebell::dte_fringe_scan(params, -0.5 * matched,
                                               0.4 * matched, 0.6 * matched, 2);
    REQUIRE(rows.size() == 2);
    for (const FringeSample& row : rows) {
      CHECK(row.p_pp + row.p_pm + row.p_mp + row.p_mm ==
            doctest::Approx(1.0).epsilon(1e-12));
    }
    CHECK(rows[0].ell1 < rows[1].ell1);
  }

  SUBCASE("range validation") {
    CHECK_THROWS_AS(dtebell::dte_fringe_scan(params, 0.0, 0.0, 1.0, 1),
                    std::invalid_argument);
    CHECK_THROWS_AS(dtebell::dte_fringe_scan(params, 0.0, 1.0, 0.0, 16),
                    std::invalid_argument);
  }
}

TEST_CASE("scan around the matched point shows at least five fringes") {
  const DteParams params = make_params(1.0, 0.5, 0.5);
  const double lambdabar = params.lambdabar_rel();
  const double matched = params.tau() * params.v_rel();
  REQUIRE(lambdabar / matched < 1e-3);  // fringe condition well satisfied
  const double ell2 = -0.5 * matched;
  const double center = 0.5 * matched;
  const double half_window = 5.0 * 2.0 * kPi * lambdabar;
  const auto rows = dtebell::dte_fringe_scan(
      params, ell2, center - half_window, center + half_window, 4001);
  int sign_changes = 0;
  double previous = rows.front().p_pp - 0.25;
  for (const FringeSample& row : rows) {
    const double current = row.p_pp - 0.25;
    if (previous != 0.0 && current != 0.0 &&
        std::signbit(previous) != std::signbit(current)) {
      ++sign_changes;
    }
    previous = current;
  }
  // ten modulation periods cross zero twice per fringe
  CHECK(sign_changes >= 10);
  CHECK(sign_changes <= 30);
}

TEST_CASE("fringe maxima at tau = 0 are spaced by 2 pi lambdabar") {
  // Enormous dispersion times so the envelope is flat across the scan to
  // better than 1e-9 of a fringe.
  const double mass = 9.988e-27;
  const double v_rel = 2e-2;
  const double t_big = 1e6;
  const double sigma_cm = std::sqrt(2.0 * mass * kHbar / t_big);
  const double sigma_rel = std::sqrt(mass * kHbar / (2.0 * t_big));
  const DteParams params(mass, v_rel, sigma_cm, sigma_rel, 0.0, 0.25);
  const double lambdabar = params.lambdabar_rel();
  const double period = 2.0 * kPi * lambdabar;

  const auto rows = dtebell::dte_fringe_scan(params, 0.0, 0.1 * lambdabar,
                                             0.1 * lambdabar + 7.0 * period,
                                             7001);
  // Locate the fringe zero crossings of the modulation by bisection; the
  // maxima sit exactly midway between adjacent crossings for a chirp-free
  // cosine fringe.
  const auto modulation = [&](double ell1) {
    return dte_probability_gaussian(params, dtebell::DteSettings(ell1, 0.0),
                                    PortOutcome(+1, +1))
               .total -
           0.25;
  };
  std::vector<double> crossings;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    double lo = rows[i - 1].ell1;
    double hi = rows[i].ell1;
    double f_lo = modulation(lo);
    double f_hi = modulation(hi);
    if (f_lo == 0.0 || std::signbit(f_lo) == std::signbit(f_hi)) {
      continue;
    }
    for (int iter = 0; iter < 200; ++iter) {
      const double mid = 0.5 * (lo + hi);
      const double f_mid = modulation(mid);
      if (f_mid == 0.0) {
        lo = hi = mid;
        break;
      }
      if (std::signbit(f_mid) == std::signbit(f_lo)) {
        lo = mid;
        f_lo = f_mid;
      } else {
        hi = mid;
      }
      if (hi - lo < 1e-16 * lambdabar) break;
    }
    crossings.push_back(0.5 * (lo + hi));
  }
  REQUIRE(crossings.size() >= 13);
  std::vector<double> maxima;
  for (std::size_t i = 0; i + 1 < crossings.size(); ++i) {
    const double mid = 0.5 * (crossings[i] + crossings[i + 1]);
    if (modulation(mid) > 0.0) {
      maxima.push_back(mid);
    }
  }
  REQUIRE(maxima.size() >= 6);
  for (std::size_t i = 0; i + 1 < maxima.size(); ++i) {
    const double spacing = maxima[i + 1] - maxima[i];
    CHECK(std::abs(spacing - period) / period < 1e-9);
  }
}

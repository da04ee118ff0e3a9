#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "core/constants.hpp"
#include "core/dte.hpp"
#include "core/errors.hpp"
#include "core/oracle.hpp"
#include "core/params.hpp"
#include "core/validation.hpp"
#include "test_common.hpp"

using dtebell::DteParams;
using dtebell::DteSettings;
using dtebell::gaussian_pair_distribution;
using dtebell::kHbar;
using dtebell::kPi;
using dtebell::MomentumAmplitude;
using dtebell::PortOutcome;
using dtebell::QuadratureOutcomes;
using dtebell::QuadratureSpec;
using dtebell::SupportBox;

namespace {

// Lithium-like pair with sharp momentum distributions so the integrand has
// only a few dozen oscillations across the support box.
DteParams fast_params(double ratio_cm, double ratio_rel, double phi_tau = 0.0,
                      double sharpness = 5.0) {
  const double mass = 9.988e-27;
  const double v_rel = 2e-2;
  const double p0 = 0.5 * mass * v_rel;
  const double sigma_rel = p0 / sharpness;
  const double t_rel = mass * kHbar / (2.0 * sigma_rel * sigma_rel);
  const double tau = ratio_rel * t_rel;
  const double t_cm = ratio_cm > 0.0 ? tau / ratio_cm : 1e9 * t_rel;
  const double sigma_cm = std::sqrt(2.0 * mass * kHbar / t_cm);
  return DteParams(mass, v_rel, sigma_cm, sigma_rel, tau, phi_tau);
}

DteSettings matched_settings(const DteParams& params, double diff_offset = 0.0,
                             double sum_offset = 0.0) {
  const double matched = params.tau() * params.v_rel();
  const double diff = matched + diff_offset;
  const double sum = sum_offset;
  return DteSettings(0.5 * (sum + diff), 0.5 * (sum - diff));
}

}  // namespace

TEST_CASE("quadrature reproduces the Gaussian closed form term by term") {
  const DteParams params = fast_params(0.8, 1.4, 0.9);
  const double lambdabar = params.lambdabar_rel();
  const QuadratureSpec spec;
  for (const double diff_offset :
       {0.0, 2.5 * lambdabar, -40.0 * lambdabar}) {
    const DteSettings settings = matched_settings(params, diff_offset,
                                                  8.0 * lambdabar);
    const QuadratureOutcomes quad = dtebell::dte_quadrature_all_outcomes(
        gaussian_pair_distribution(params), params, settings, spec);
    double sum = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
      const double closed =
          dte_probability_gaussian(params, settings, PortOutcome::all()[i])
              .total;
      CHECK(std::abs(quad.probability[i] - closed) <
            std::max(1e-6, 10.0 * quad.error_estimate[i]));
      CHECK(quad.probability[i] >= 0.0);
      CHECK(quad.probability[i] <= 1.0);
      sum += quad.probability[i];
    }
    CHECK(std::abs(sum - 1.0) <=
          4.0 * *std::max_element(quad.error_estimate.begin(),
                                  quad.error_estimate.end()) +
              1e-7);
    CHECK(std::abs(quad.norm - 1.0) < 1e-6);
  }
}

TEST_CASE("seeded random scenarios agree with the closed form") {
  const QuadratureSpec spec;
  const dtebell::ValidationReport report =
      dtebell::run_closed_form_validation(10, 20240817u, 1e-6, spec);
  CHECK(report.pass);
  CHECK(report.max_abs_deviation < 1e-6);
  CHECK(report.rows.size() == 10);
}

TEST_CASE("validation draws are deterministic for a given seed") {
  std::mt19937_64 rng_a(77);
  std::mt19937_64 rng_b(77);
  for (int i = 0; i < 5; ++i) {
    const auto a = dtebell::draw_validation_scenario(rng_a);
    const auto b = dtebell::draw_validation_scenario(rng_b);
    CHECK(a.params.mass() == b.params.mass());
    CHECK(a.params.tau() == b.params.tau());
    CHECK(a.settings.ell1 == b.settings.ell1);
    CHECK(a.settings.ell2 == b.settings.ell2);
  }
}

TEST_CASE("zero delay and zero offsets give 1/2 for any normalized state") {
  // Mixture of two displaced Gaussian pairs: normalized but far from the
  // single-Gaussian family.
  const DteParams params = fast_params(0.0, 0.0);
  const double p0 = params.p0_rel();
  const double s = 0.2 * p0;
  const double norm = 1.0 / (2.0 * kPi * s * s);
  const auto pr = [=](double p1, double p2) {
    const double g1 = std::exp(-((p1 - 1.2 * p0) * (p1 - 1.2 * p0) +
                                 (p2 + 0.8 * p0) * (p2 + 0.8 * p0)) /
                               (2.0 * s * s));
    const double g2 = std::exp(-((p1 - 0.7 * p0) * (p1 - 0.7 * p0) +
                                 (p2 + 1.3 * p0) * (p2 + 1.3 * p0)) /
                               (2.0 * s * s));
    return 0.5 * norm * (g1 + g2);
  };
  const SupportBox box{1.2 * p0 - 10.0 * s - 0.5 * p0, 1.2 * p0 + 10.0 * s,
                       -1.3 * p0 - 10.0 * s, -0.8 * p0 + 10.0 * s + 0.5 * p0};
  const MomentumAmplitude psi = MomentumAmplitude::from_distribution(pr, box);
  const QuadratureSpec spec;
  const auto result = dtebell::dte_probability_quadrature(
      psi, params, DteSettings(0.0, 0.0), PortOutcome(+1, +1), spec);
  CHECK(result.probability == doctest::Approx(0.5).epsilon(1e-8));
}

TEST_CASE("near-delta distribution reaches the plane-wave limit") {
  // Tiny momentum spreads collapse the integral onto the plane-wave phase
  // cos(pbar.l/hbar - pbar^2 tau/(2 m hbar) - phi_tau).
  const double mass = 9.988e-27;
  const double v_rel = 2e-2;
  const double p0 = 0.5 * mass * v_rel;
  const double phi_tau = 0.35;
  const double tau = 1e-6;
  const DteParams params(mass, v_rel, 1e-4 * p0, 0.5e-4 * p0, tau, phi_tau);
  const MomentumAmplitude psi = gaussian_pair_distribution(params);
  const QuadratureSpec spec;
  const double lambdabar = params.lambdabar_rel();
  for (const double x : {0.0, 0.7, 1.9, 3.2}) {
    const DteSettings settings(x * lambdabar, 0.25 * x * lambdabar);
    const double phase =
        (p0 * settings.ell1 - p0 * settings.ell2) / kHbar -
        2.0 * p0 * p0 * tau / (2.0 * mass * kHbar) - phi_tau;
    const double expected = 0.25 * (1.0 + std::cos(phase));
    const auto result = dtebell::dte_probability_quadrature(
        psi, params, settings, PortOutcome(+1, +1), spec);
    CHECK(result.probability == doctest::Approx(expected).epsilon(1e-5));
  }
}

TEST_CASE("amplitude-backed and distribution-backed states agree") {
  const DteParams params = fast_params(0.9, 0.9, 0.2);
  const MomentumAmplitude dist = gaussian_pair_distribution(params);
  // Amplitude whose squared modulus is the same Gaussian, with a nontrivial
  // momentum phase riding on top.
  const double sigma_cm = params.sigma_p_cm();
  const double sigma_rel = params.sigma_p_rel();
  const double mv = params.mass() * params.v_rel();
  const double amp_norm = 1.0 / std::sqrt(2.0 * kPi * sigma_cm * sigma_rel);
  const auto amp = [=](double p1, double p2) {
    const double cm = p1 + p2;
    const double rel = p1 - p2 - mv;
    const double mag =
        amp_norm * std::exp(-cm * cm / (4.0 * sigma_cm * sigma_cm) -
                            rel * rel / (16.0 * sigma_rel * sigma_rel));
    return std::polar(mag, 3.0 * (p1 - p2) / mv);
  };
  const MomentumAmplitude amp_state =
      MomentumAmplitude::from_amplitude(amp, dist.box());
  const QuadratureSpec spec;
  const DteSettings settings = matched_settings(params, 0.0, 0.0);
  const auto a = dtebell::dte_quadrature_all_outcomes(amp_state, params,
                                                      settings, spec);
  const auto d =
      dtebell::dte_quadrature_all_outcomes(dist, params, settings, spec);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(std::abs(a.probability[i] - d.probability[i]) < 1e-8);
  }
}

TEST_CASE("general splitting angles match the ideal time-bin law") {
  // Near-delta state and tau ~ 0: the quadrature's general-theta combination
  // must reduce to the time-bin probability with the accumulated plane-wave
  // phase playing the role of phi1 + phi2.
  const double mass = 9.988e-27;
  const double v_rel = 2e-2;
  const double p0 = 0.5 * mass * v_rel;
  const double phi_tau = 0.8;
  const DteParams params(mass, v_rel, 1e-4 * p0, 0.5e-4 * p0, 0.0, phi_tau);
  const MomentumAmplitude psi = gaussian_pair_distribution(params);
  const QuadratureSpec spec;
  const double lambdabar = params.lambdabar_rel();
  const DteSettings settings(1.3 * lambdabar, -0.4 * lambdabar, 0.3, 1.1);
  const double phase = (p0 * settings.ell1 - p0 * settings.ell2) / kHbar;
  for (const PortOutcome& outcome : PortOutcome::all()) {
    const double expected = dtebell::tbe_probability(
        outcome, dtebell::TbeSettings(phase, 0.0, 0.3, 1.1), phi_tau);
    const auto result = dtebell::dte_probability_quadrature(
        psi, params, settings, outcome, spec);
    CHECK(result.probability == doctest::Approx(expected).epsilon(1e-5));
  }
}

TEST_CASE("momentum phase invariance") {
  const DteParams params = fast_params(0.7, 1.1, 0.4);
  const double sigma_cm = params.sigma_p_cm();
  const double sigma_rel = params.sigma_p_rel();
  const double mv = params.mass() * params.v_rel();
  const double amp_norm = 1.0 / std::sqrt(2.0 * kPi * sigma_cm * sigma_rel);
  const auto amp = [=](double p1, double p2) -> std::complex<double> {
    const double cm = p1 + p2;
    const double rel = p1 - p2 - mv;
    return {amp_norm * std::exp(-cm * cm / (4.0 * sigma_cm * sigma_cm) -
                                rel * rel / (16.0 * sigma_rel * sigma_rel)),
            0.0};
  };
  const MomentumAmplitude psi = MomentumAmplitude::from_amplitude(
      amp, gaussian_pair_distribution(params).box());
  const QuadratureSpec spec;
  const DteSettings settings = matched_settings(params, params.lambdabar_rel());
  const PortOutcome outcome(+1, -1);

  SUBCASE("identity phase changes nothing") {
    const double dev = dtebell::momentum_phase_invariance_check(
        psi, [](double, double) { return 0.0; }, params, settings, outcome,
        spec);
    CHECK(dev == 0.0);
  }

  SUBCASE("rigid source displacement") {
    const double d = 3.7e-4;  // meters
    const double dev = dtebell::momentum_phase_invariance_check(
        psi,
        [d](double p1, double p2) { return (p1 + p2) * d / kHbar; }, params,
        settings, outcome, spec);
    CHECK(dev < 1e-8);
  }

  SUBCASE("extra free flight drops out") {
    const double t = 0.5 * params.t_rel();
    const double chirp = t / (2.0 * params.mass() * kHbar);
    const double dev = dtebell::momentum_phase_invariance_check(
        psi,
        [chirp](double p1, double p2) {
          return -(p1 * p1 + p2 * p2) * chirp;
        },
        params, settings, outcome, spec);
    CHECK(dev < 1e-8);
  }
}

TEST_CASE("parity-exchange symmetry") {
  const QuadratureSpec spec;

  SUBCASE("the paper-family Gaussian is symmetric") {
    // Amplitude-backed so the mirrored run goes through genuinely different
    // arithmetic and only the symmetry keeps the probabilities together.
    const DteParams params = fast_params(1.3, 0.6, 1.1);
    const double sigma_cm = params.sigma_p_cm();
    const double sigma_rel = params.sigma_p_rel();
    const double mv = params.mass() * params.v_rel();
    const double amp_norm = 1.0 / std::sqrt(2.0 * kPi * sigma_cm * sigma_rel);
    const auto amp = [=](double p1, double p2) {
      const double cm = p1 + p2;
      const double rel = p1 - p2 - mv;
      const double mag =
          amp_norm * std::exp(-cm * cm / (4.0 * sigma_cm * sigma_cm) -
                              rel * rel / (16.0 * sigma_rel * sigma_rel));
      // symmetric phase: xi(-p2,-p1) = xi(p1,p2)
      return std::polar(mag, 0.8 * cm * cm / (sigma_cm * sigma_cm));
    };
    const MomentumAmplitude psi = MomentumAmplitude::from_amplitude(
        amp, gaussian_pair_distribution(params).box());
    const double dev = dtebell::parity_symmetry_check(
        psi, params, matched_settings(params, 0.5 * params.lambdabar_rel()),
        spec);
    CHECK(dev < 1e-8);
  }

  SUBCASE("symmetric distribution makes the mirrored integrand identical") {
    const DteParams params = fast_params(1.0, 1.0, 0.3);
    const MomentumAmplitude psi = gaussian_pair_distribution(params);
    const double ell = 0.25 * params.tau() * params.v_rel();
    const double dev = dtebell::parity_symmetry_check(
        psi, params, DteSettings(ell, ell), spec);
    CHECK(dev == 0.0);
  }

  SUBCASE("negative control: a skewed distribution is flagged") {
    const DteParams params = fast_params(0.0, 0.0, 0.0);
    const double p0 = params.p0_rel();
    const double s1 = 0.15 * p0;
    const double s2 = 0.45 * p0;
    const double norm = 1.0 / (2.0 * kPi * s1 * s2);
    // particle 1 sharp around +p0, particle 2 broad around -p0/2: clearly
    // not invariant under pr(p1,p2) -> pr(-p2,-p1)
    const auto pr = [=](double p1, double p2) {
      return norm *
             std::exp(-(p1 - p0) * (p1 - p0) / (2.0 * s1 * s1) -
                      (p2 + 0.5 * p0) * (p2 + 0.5 * p0) / (2.0 * s2 * s2));
    };
    const SupportBox box{p0 - 9.0 * s1, p0 + 9.0 * s1, -0.5 * p0 - 9.0 * s2,
                         -0.5 * p0 + 9.0 * s2};
    const MomentumAmplitude psi = MomentumAmplitude::from_distribution(pr, box);
    // Offsets on the fringe scale keep the modulation term alive, where the
    // mismatch of the two momentum means is visible.
    const double lambdabar = params.lambdabar_rel();
    const double dev = dtebell::parity_symmetry_check(
        psi, params, DteSettings(3.0 * lambdabar, -2.0 * lambdabar), spec);
    CHECK(std::isfinite(dev));
    CHECK(dev > 1e-3);
  }
}

TEST_CASE("halving the tolerance stays within the coarser error estimate") {
  const DteParams params = fast_params(1.2, 1.2, 0.5);
  const MomentumAmplitude psi = gaussian_pair_distribution(params);
  const DteSettings settings = matched_settings(params, 2.0 * params.lambdabar_rel());
  QuadratureSpec coarse;
  coarse.abs_tolerance = 2e-8;
  QuadratureSpec fine;
  fine.abs_tolerance = 1e-8;
  const auto a =
      dtebell::dte_quadrature_all_outcomes(psi, params, settings, coarse);
  const auto b =
      dtebell::dte_quadrature_all_outcomes(psi, params, settings, fine);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(std::abs(a.probability[i] - b.probability[i]) <=
          a.error_estimate[i] + 1e-12);
  }
}

TEST_CASE("error paths") {
  const DteParams params = fast_params(1.0, 1.0);

  SUBCASE("denormalized distribution is rejected") {
    const MomentumAmplitude good = gaussian_pair_distribution(params);
    const auto scaled = [&good](double p1, double p2) {
      return 0.9 * good.pr(p1, p2);
    };
    const MomentumAmplitude bad =
        MomentumAmplitude::from_distribution(scaled, good.box());
    CHECK_THROWS_AS(
        dtebell::dte_quadrature_all_outcomes(
            bad, params, matched_settings(params), QuadratureSpec{}),
        dtebell::NormalizationError);
  }

  SUBCASE("exhausted panel budget carries its best estimate") {
    QuadratureSpec starved;
    starved.abs_tolerance = 1e-13;
    starved.max_panels = 256;
    starved.max_depth = 1;
    const MomentumAmplitude psi = gaussian_pair_distribution(params);
    const DteSettings settings = matched_settings(params);
    bool threw = false;
    try {
      dtebell::dte_quadrature_all_outcomes(psi, params, settings, starved);
    } catch (const dtebell::ToleranceNotReached& error) {
      threw = true;
      CHECK(std::isfinite(error.best_value()));
      CHECK(error.error_estimate() > 1e-13);
    }
    CHECK(threw);
    const auto best = dtebell::try_dte_quadrature_all_outcomes(
        psi, params, settings, starved);
    CHECK_FALSE(best.converged);
    CHECK(std::isfinite(best.probability[0]));
  }

  SUBCASE("invalid quadrature specs are rejected") {
    QuadratureSpec bad;
    bad.abs_tolerance = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = QuadratureSpec{};
    bad.rule_points = 17;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = QuadratureSpec{};
    bad.max_depth = 0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  }
}

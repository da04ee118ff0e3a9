#include "core/validation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "core/constants.hpp"

namespace dtebell {

namespace {

// Uniform double in [0, 1) from the top 53 bits; identical on every
// platform for a given seed, unlike the standard distributions.
double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

double log_uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::exp(uniform(rng, std::log(lo), std::log(hi)));
}

}  // namespace

ValidationScenario draw_validation_scenario(std::mt19937_64& rng) {
  const double mass = log_uniform(rng, 1e-27, 2e-26);
  const double v_rel = log_uniform(rng, 5e-3, 5e-2);
  const double p0 = 0.5 * mass * v_rel;

  // Momentum sharpness p0/sigma_p_rel in [4, 7] keeps the number of fringe
  // oscillations across the support box small enough for fast quadrature.
  const double sigma_p_rel = p0 / uniform(rng, 4.0, 7.0);
  const double t_rel = mass * kHbar / (2.0 * sigma_p_rel * sigma_p_rel);
  const double ratio_rel = uniform(rng, 0.05, 3.0);
  const double tau = ratio_rel * t_rel;
  const double ratio_cm = uniform(rng, 0.05, 3.0);
  const double t_cm = tau / ratio_cm;
  const double sigma_p_cm = std::sqrt(2.0 * mass * kHbar / t_cm);
  const double phi_tau = uniform(rng, 0.0, 2.0 * kPi);

  const DteParams params(mass, v_rel, sigma_p_cm, sigma_p_rel, tau, phi_tau);

  const double lambdabar = params.lambdabar_rel();
  const double matched = tau * v_rel;
  const double width_rel = std::sqrt(2.0 * v_rel * lambdabar * t_rel *
                                     (1.0 + ratio_rel * ratio_rel));
  const double width_cm = std::sqrt(2.0 * v_rel * lambdabar * t_cm *
                                    (1.0 + ratio_cm * ratio_cm));
  const double span_rel = 4.0 * std::min(width_rel, 0.5 * matched);
  const double span_cm = 4.0 * std::min(width_cm, 0.5 * matched);
  const double ell_diff = matched + uniform(rng, -span_rel, span_rel);
  const double ell_sum = uniform(rng, -span_cm, span_cm);

  return {params,
          DteSettings(0.5 * (ell_sum + ell_diff), 0.5 * (ell_sum - ell_diff))};
}

ValidationReport run_closed_form_validation(int draws, std::uint64_t seed,
                                            double tolerance,
                                            const QuadratureSpec& spec) {
  if (draws < 1) {
    throw std::invalid_argument("validation needs at least one draw");
  }
  if (!(tolerance > 0.0)) {
    throw std::invalid_argument("validation tolerance must be > 0");
  }
  spec.validate();

  ValidationReport report;
  report.seed = seed;
  report.draws = draws;
  report.tolerance = tolerance;
  report.max_abs_deviation = 0.0;
  report.rows.reserve(static_cast<std::size_t>(draws));

  std::mt19937_64 rng(seed);
  for (int i = 0; i < draws; ++i) {
    const ValidationScenario scenario = draw_validation_scenario(rng);
    const MomentumAmplitude pr = gaussian_pair_distribution(scenario.params);
    const QuadratureOutcomes quadrature =
        dte_quadrature_all_outcomes(pr, scenario.params, scenario.settings,
                                    spec);

    ValidationRow row;
    row.mass = scenario.params.mass();
    row.v_rel = scenario.params.v_rel();
    row.sigma_p_cm = scenario.params.sigma_p_cm();
    row.sigma_p_rel = scenario.params.sigma_p_rel();
    row.tau = scenario.params.tau();
    row.phi_tau = scenario.params.phi_tau();
    row.ell1 = scenario.settings.ell1;
    row.ell2 = scenario.settings.ell2;
    row.p_quadrature = quadrature.probability;
    row.quadrature_error = quadrature.error_estimate;
    row.max_abs_deviation = 0.0;
    const auto& outcomes = PortOutcome::all();
    for (std::size_t k = 0; k < outcomes.size(); ++k) {
      row.p_closed[k] =
          dte_probability_gaussian(scenario.params, scenario.settings,
                                   outcomes[k])
              .total;
      row.max_abs_deviation = std::max(
          row.max_abs_deviation, std::abs(row.p_closed[k] - row.p_quadrature[k]));
    }
    report.max_abs_deviation =
        std::max(report.max_abs_deviation, row.max_abs_deviation);
    report.rows.push_back(row);
  }
  report.pass = report.max_abs_deviation < tolerance;
  return report;
}

}  // namespace dtebell

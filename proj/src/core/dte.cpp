#include "core/dte.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "core/constants.hpp"
#include "core/errors.hpp"

namespace dtebell {

namespace {

void require_symmetric(const DteSettings& settings, const char* where) {
  if (!settings.symmetric_splitters()) {
    throw UnsupportedSplittingError(
        std::string(where) +
        ": closed form is only valid for symmetric splitters (theta = pi/4)");
  }
}

struct Modulation {
  double amplitude;
  double argument;
  double phi0;
};

// Eq.-by-term evaluation of the Gaussian closed form in the dimensionless
// groups r = tau/T and a = (delta ell)^2 / (2 v lambdabar T).
Modulation evaluate_modulation(const DteParams& params, double ell_sum,
                               double ell_diff) {
  const double tau = params.tau();
  const double v = params.v_rel();
  const double lambdabar = params.lambdabar_rel();
  const double t_cm = params.t_cm();
  const double t_rel = params.t_rel();

  const double r_cm = tau / t_cm;
  const double r_rel = tau / t_rel;
  const double mismatch = ell_diff - tau * v;

  const double a_rel = mismatch * mismatch / (2.0 * v * lambdabar * t_rel);
  const double a_cm = ell_sum * ell_sum / (2.0 * v * lambdabar * t_cm);

  const double lorentzian = std::pow(1.0 + r_cm * r_cm, -0.25) *
                            std::pow(1.0 + r_rel * r_rel, -0.25);
  const double envelope =
      std::exp(-a_rel / (1.0 + r_rel * r_rel) - a_cm / (1.0 + r_cm * r_cm));

  const double phi0 = tau * v / lambdabar + std::atan(r_cm) +
                      std::atan(r_rel) + 2.0 * params.phi_tau();
  const double argument = ell_diff / lambdabar +
                          r_rel * a_rel / (1.0 + r_rel * r_rel) +
                          r_cm * a_cm / (1.0 + r_cm * r_cm) - 0.5 * phi0;

  return {lorentzian * envelope, argument, phi0};
}

}  // namespace

DteSettings::DteSettings(double ell1_in, double ell2_in, double theta1_in,
                         double theta2_in)
    : ell1(ell1_in), ell2(ell2_in), theta1(theta1_in), theta2(theta2_in) {
  if (!std::isfinite(ell1) || !std::isfinite(ell2)) {
    throw std::invalid_argument("arm-length offsets must be finite");
  }
  if (!(theta1 >= 0.0 && theta1 <= 0.5 * kPi) ||
      !(theta2 >= 0.0 && theta2 <= 0.5 * kPi)) {
    throw std::invalid_argument("splitting angles must lie in [0, pi/2]");
  }
}

bool DteSettings::symmetric_splitters() const {
  return std::abs(theta1 - kQuarterPi) <= 1e-12 &&
         std::abs(theta2 - kQuarterPi) <= 1e-12;
}

DteProbabilityBreakdown dte_probability_gaussian(const DteParams& params,
                                                 const DteSettings& settings,
                                                 const PortOutcome& outcome) {
  require_symmetric(settings, "dte_probability_gaussian");
  const Modulation mod = evaluate_modulation(
      params, settings.ell1 + settings.ell2, settings.ell1 - settings.ell2);
  const double total =
      0.25 *
      (1.0 + outcome.parity() * mod.amplitude * std::cos(mod.argument));
  return {total, mod.amplitude, mod.argument, mod.phi0};
}

double dte_visibility(const DteParams& params, double ell_sum,
                      double ell_diff) {
  if (!std::isfinite(ell_sum) || !std::isfinite(ell_diff)) {
    throw std::invalid_argument("arm-length combinations must be finite");
  }
  return evaluate_modulation(params, ell_sum, ell_diff).amplitude;
}

std::vector<FringeSample> dte_fringe_scan(const DteParams& params, double ell2,
                                          double start, double stop,
                                          int count) {
  if (count < 2) {
    throw std::invalid_argument("fringe scan needs count >= 2");
  }
  if (!(start < stop)) {
    throw std::invalid_argument("fringe scan needs start < stop");
  }
  std::vector<FringeSample> rows;
  rows.reserve(static_cast<std::size_t>(count));
  const double step = (stop - start) / (count - 1);
  for (int i = 0; i < count; ++i) {
    const double ell1 = start + i * step;
    const DteSettings settings(ell1, ell2);
    const Modulation mod =
        evaluate_modulation(params, ell1 + ell2, ell1 - ell2);
    const double fringe = mod.amplitude * std::cos(mod.argument);
    rows.push_back({ell1, 0.25 * (1.0 + fringe), 0.25 * (1.0 - fringe),
                    0.25 * (1.0 - fringe), 0.25 * (1.0 + fringe),
                    mod.amplitude, mod.argument});
  }
  return rows;
}

}  // namespace dtebell

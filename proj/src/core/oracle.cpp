#include "core/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "core/constants.hpp"
#include "core/errors.hpp"
#include "core/quadrature.hpp"

namespace dtebell {

namespace {

constexpr double kBoxSigmas = 8.0;
constexpr double kChirpPhasePerPanel = 0.5 * kPi;
constexpr double kLinearPhasePerPanel = 2.0 * kPi;
constexpr int kMinPanelsPerAxis = 8;

// Initial panel edges along one momentum axis. Cells are capped so that the
// dispersion chirp p^2 tau/(2 m hbar) varies by less than pi/2 and the
// displacement phase p ell/hbar by less than 2 pi per cell, which keeps the
// tensor rule ahead of the integrand's oscillation everywhere in the box.
std::vector<double> axis_breakpoints(double lo, double hi, double ell,
                                     double chirp_coeff) {
  std::vector<double> points;
  points.push_back(lo);
  points.push_back(hi);
  const double width = hi - lo;
  for (int i = 1; i < kMinPanelsPerAxis; ++i) {
    points.push_back(lo + width * i / kMinPanelsPerAxis);
  }
  const double linear_rate = std::abs(ell) / kHbar;
  const int n_linear =
      static_cast<int>(std::ceil(linear_rate * width / kLinearPhasePerPanel));
  for (int i = 1; i < n_linear; ++i) {
    points.push_back(lo + width * i / n_linear);
  }
  if (chirp_coeff > 0.0) {
    // Equal chirp-phase increments; |p| = sqrt(phase/chirp_coeff). The sign
    // keeps the emitted points on the requested side of the origin.
    const auto add_side = [&](double a, double b, double sign) {
      // 0 <= a < b in absolute momentum
      const double phase_a = chirp_coeff * a * a;
      const double phase_b = chirp_coeff * b * b;
      for (double phase = phase_a + kChirpPhasePerPanel; phase < phase_b;
           phase += kChirpPhasePerPanel) {
        points.push_back(sign * std::sqrt(phase / chirp_coeff));
      }
    };
    if (lo >= 0.0) {
      add_side(lo, hi, 1.0);
    } else if (hi <= 0.0) {
      add_side(-hi, -lo, -1.0);
    } else {
      points.push_back(0.0);
      add_side(0.0, hi, 1.0);
      add_side(0.0, -lo, -1.0);
    }
  }
  std::sort(points.begin(), points.end());
  std::vector<double> merged;
  merged.reserve(points.size());
  const double min_gap = 1e-12 * width;
  for (double p : points) {
    if (p < lo - min_gap || p > hi + min_gap) continue;
    if (merged.empty() || p - merged.back() > min_gap) {
      merged.push_back(p);
    }
  }
  merged.front() = lo;
  merged.back() = hi;
  return merged;
}

struct BaseIntegrals {
  double norm;
  std::complex<double> fringe;  // Int pr e^{i(p.l/hbar - p^2 tau/2 m hbar)}
  double norm_error;
  double fringe_error;  // |Kronrod - Gauss| summed, by component, combined
  double fringe_error_re;
  double fringe_error_im;
  std::size_t panels;
  std::size_t evaluations;
  bool converged;
};

BaseIntegrals base_integrals(const MomentumAmplitude& psi,
                             const DteParams& params,
                             const DteSettings& settings,
                             const QuadratureSpec& spec) {
  spec.validate();
  const SupportBox& box = psi.box();
  if (!(box.p1_min < box.p1_max) || !(box.p2_min < box.p2_max)) {
    throw std::invalid_argument("support box must be nonempty");
  }
  const double chirp_coeff =
      params.tau() / (2.0 * params.mass() * kHbar);
  const std::vector<double> x_breaks =
      axis_breakpoints(box.p1_min, box.p1_max, settings.ell1, chirp_coeff);
  const std::vector<double> y_breaks =
      axis_breakpoints(box.p2_min, box.p2_max, settings.ell2, chirp_coeff);

  const double inv_hbar = 1.0 / kHbar;
  const double ell1 = settings.ell1;
  const double ell2 = settings.ell2;

  quad::AdaptiveOptions options;
  options.abs_tolerance = spec.abs_tolerance;
  options.max_depth = spec.max_depth;
  options.rule_points = spec.rule_points;
  options.max_panels = spec.max_panels;

  const auto integrand = [&](double p1, double p2) -> std::array<double, 3> {
    const double weight = psi.pr(p1, p2);
    const double phase = (p1 * ell1 + p2 * ell2) * inv_hbar -
                         (p1 * p1 + p2 * p2) * chirp_coeff;
    return {weight, weight * std::cos(phase), weight * std::sin(phase)};
  };
  const quad::AdaptiveResult<3> integral =
      quad::integrate_adaptive<3>(integrand, x_breaks, y_breaks, options);

  BaseIntegrals out;
  out.norm = integral.value[0];
  out.fringe = {integral.value[1], integral.value[2]};
  out.norm_error = integral.error[0];
  out.fringe_error_re = integral.error[1];
  out.fringe_error_im = integral.error[2];
  out.fringe_error = integral.error[1] + integral.error[2];
  out.panels = integral.panels;
  out.evaluations = integral.evaluations;
  out.converged = integral.converged;
  return out;
}

QuadratureOutcomes assemble_outcomes(const BaseIntegrals& base,
                                     const DteParams& params,
                                     const DteSettings& settings) {
  const double cos_tau = std::cos(params.phi_tau());
  const double sin_tau = std::sin(params.phi_tau());
  // Re{e^{-i phi_tau} I}
  const double fringe_term =
      cos_tau * base.fringe.real() + sin_tau * base.fringe.imag();
  const double fringe_term_error = std::abs(cos_tau) * base.fringe_error_re +
                                   std::abs(sin_tau) * base.fringe_error_im;

  QuadratureOutcomes out;
  out.norm = base.norm;
  out.norm_error = base.norm_error;
  out.panels = base.panels;
  out.evaluations = base.evaluations;
  const auto& outcomes = PortOutcome::all();
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    const PortOutcome& outcome = outcomes[i];
    const double c_on =
        early_port_coefficient(settings.theta1, outcome.sigma1) *
        early_port_coefficient(settings.theta2, outcome.sigma2);
    const double c_off =
        late_port_coefficient(settings.theta1, outcome.sigma1) *
        late_port_coefficient(settings.theta2, outcome.sigma2);
    out.probability[i] =
        0.5 * ((c_on * c_on + c_off * c_off) * base.norm +
               2.0 * c_on * c_off * fringe_term);
    out.error_estimate[i] =
        0.5 * ((c_on * c_on + c_off * c_off) * base.norm_error +
               2.0 * std::abs(c_on * c_off) * fringe_term_error);
  }
  return out;
}

}  // namespace

MomentumAmplitude::MomentumAmplitude(AmplitudeFn amp, DistributionFn dist,
                                     bool is_distribution,
                                     const SupportBox& box)
    : amplitude_(std::move(amp)),
      distribution_(std::move(dist)),
      is_distribution_(is_distribution),
      box_(box) {
  if (!(box.p1_min < box.p1_max) || !(box.p2_min < box.p2_max) ||
      !std::isfinite(box.p1_min) || !std::isfinite(box.p1_max) ||
      !std::isfinite(box.p2_min) || !std::isfinite(box.p2_max)) {
    throw std::invalid_argument("support box must be finite and nonempty");
  }
}

MomentumAmplitude MomentumAmplitude::from_amplitude(AmplitudeFn psi,
                                                    const SupportBox& box) {
  if (!psi) {
    throw std::invalid_argument("amplitude callback must be set");
  }
  return MomentumAmplitude(std::move(psi), nullptr, false, box);
}

MomentumAmplitude MomentumAmplitude::from_distribution(DistributionFn pr,
                                                       const SupportBox& box) {
  if (!pr) {
    throw std::invalid_argument("distribution callback must be set");
  }
  return MomentumAmplitude(nullptr, std::move(pr), true, box);
}

double MomentumAmplitude::pr(double p1, double p2) const {
  if (is_distribution_) {
    return distribution_(p1, p2);
  }
  return std::norm(amplitude_(p1, p2));
}

MomentumAmplitude gaussian_pair_distribution(const DteParams& params) {
  const double sigma_cm = params.sigma_p_cm();
  const double sigma_rel = params.sigma_p_rel();
  const double mv = params.mass() * params.v_rel();
  const double norm = 1.0 / (2.0 * kPi * sigma_cm * sigma_rel);
  auto pr = [sigma_cm, sigma_rel, mv, norm](double p1, double p2) {
    const double cm = p1 + p2;
    const double rel = p1 - p2 - mv;
    return norm * std::exp(-cm * cm / (2.0 * sigma_cm * sigma_cm) -
                           rel * rel / (8.0 * sigma_rel * sigma_rel));
  };
  // Per-particle moments: mean +/- m v/2, std = sqrt(sigma_cm^2+4 sigma_rel^2)/2.
  const double p_mean = 0.5 * mv;
  const double p_std =
      0.5 * std::sqrt(sigma_cm * sigma_cm + 4.0 * sigma_rel * sigma_rel);
  const SupportBox box{p_mean - kBoxSigmas * p_std, p_mean + kBoxSigmas * p_std,
                       -p_mean - kBoxSigmas * p_std,
                       -p_mean + kBoxSigmas * p_std};
  return MomentumAmplitude::from_distribution(pr, box);
}

void QuadratureSpec::validate() const {
  if (!(abs_tolerance > 0.0) || !std::isfinite(abs_tolerance)) {
    throw std::invalid_argument("quadrature tolerance must be > 0");
  }
  if (max_depth < 1) {
    throw std::invalid_argument("quadrature max_depth must be >= 1");
  }
  if (rule_points != 15 && rule_points != 21) {
    throw std::invalid_argument("quadrature rule must be 15 or 21 points");
  }
  if (max_panels < 16) {
    throw std::invalid_argument("quadrature panel budget is too small");
  }
}

QuadratureOutcomes try_dte_quadrature_all_outcomes(const MomentumAmplitude& psi,
                                                   const DteParams& params,
                                                   const DteSettings& settings,
                                                   const QuadratureSpec& spec) {
  const BaseIntegrals base = base_integrals(psi, params, settings, spec);
  QuadratureOutcomes out = assemble_outcomes(base, params, settings);
  out.converged = base.converged;
  if (std::abs(base.norm - 1.0) > 1e-6 + 10.0 * base.norm_error) {
    throw NormalizationError(
        "momentum distribution is not normalized over its support box",
        base.norm, base.norm_error);
  }
  return out;
}

QuadratureOutcomes dte_quadrature_all_outcomes(const MomentumAmplitude& psi,
                                               const DteParams& params,
                                               const DteSettings& settings,
                                               const QuadratureSpec& spec) {
  const QuadratureOutcomes out =
      try_dte_quadrature_all_outcomes(psi, params, settings, spec);
  if (!out.converged) {
    double worst = 0.0;
    for (double err : out.error_estimate) {
      worst = std::max(worst, err);
    }
    throw ToleranceNotReached(
        "quadrature tolerance not reached within the panel budget",
        out.probability[0], worst);
  }
  return out;
}

QuadratureProbability dte_probability_quadrature(const MomentumAmplitude& psi,
                                                 const DteParams& params,
                                                 const DteSettings& settings,
                                                 const PortOutcome& outcome,
                                                 const QuadratureSpec& spec) {
  const QuadratureOutcomes all =
      dte_quadrature_all_outcomes(psi, params, settings, spec);
  const std::size_t index =
      (outcome.sigma1 > 0 ? 0 : 2) + (outcome.sigma2 > 0 ? 0 : 1);
  return {all.probability[index], all.error_estimate[index]};
}

double momentum_phase_invariance_check(
    const MomentumAmplitude& psi,
    const std::function<double(double, double)>& xi, const DteParams& params,
    const DteSettings& settings, const PortOutcome& outcome,
    const QuadratureSpec& spec) {
  if (!xi) {
    throw std::invalid_argument("phase callback must be set");
  }
  const QuadratureProbability reference =
      dte_probability_quadrature(psi, params, settings, outcome, spec);

  MomentumAmplitude transformed = [&]() {
    if (psi.is_distribution()) {
      // A pure momentum phase leaves pr untouched.
      return psi;
    }
    const auto original = psi.amplitude();
    auto shifted = [original, xi](double p1, double p2) {
      return original(p1, p2) *
             std::polar(1.0, xi(p1, p2));
    };
    return MomentumAmplitude::from_amplitude(shifted, psi.box());
  }();
  const QuadratureProbability moved = dte_probability_quadrature(
      transformed, params, settings, outcome, spec);
  return std::abs(moved.probability - reference.probability);
}

double parity_symmetry_check(const MomentumAmplitude& psi,
                             const DteParams& params,
                             const DteSettings& settings,
                             const QuadratureSpec& spec) {
  const QuadratureOutcomes direct =
      dte_quadrature_all_outcomes(psi, params, settings, spec);

  // The mirrored pair component carries the parity-reflected state with the
  // particles' interferometer assignment exchanged. Relabeling the
  // integration variables folds both operations into the distribution alone:
  // pr'(p1,p2) = pr(-p2,-p1), evaluated with the original settings and
  // outcomes.
  const SupportBox& box = psi.box();
  const SupportBox reflected_box{-box.p2_max, -box.p2_min, -box.p1_max,
                                 -box.p1_min};
  MomentumAmplitude reflected = [&]() {
    if (psi.is_distribution()) {
      auto pr = [&psi](double p1, double p2) { return psi.pr(-p2, -p1); };
      return MomentumAmplitude::from_distribution(pr, reflected_box);
    }
    const auto original = psi.amplitude();
    auto amp = [original](double p1, double p2) {
      return original(-p2, -p1);
    };
    return MomentumAmplitude::from_amplitude(amp, reflected_box);
  }();
  const QuadratureOutcomes mirrored =
      dte_quadrature_all_outcomes(reflected, params, settings, spec);

  double worst = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    worst = std::max(worst,
                     std::abs(direct.probability[i] - mirrored.probability[i]));
  }
  return worst;
}

}  // namespace dtebell

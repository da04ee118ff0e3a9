#include "core/bell.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "core/constants.hpp"
#include "core/dte.hpp"
#include "core/errors.hpp"
#include "core/tbe.hpp"

namespace dtebell {

namespace {

constexpr double kQuarterPi = DteSettings::kQuarterPi;

void require_mode(const ChshSettings& settings, SettingsMode mode,
                  const char* what) {
  if (settings.mode != mode) {
    throw ModeMismatchError(std::string(what) +
                            ": settings are tagged for the other analysis");
  }
}

ChshResult assemble(const ChshSettings& settings, double c_ab,
                    double c_ab_prime, double c_a_prime_b,
                    double c_a_prime_b_prime) {
  const double s =
      std::abs(c_ab + c_ab_prime + c_a_prime_b - c_a_prime_b_prime);
  // Sanity net; the tight S <= 2 sqrt 2 + 1e-9 property is asserted in the
  // test suites where the engine's numerical error is known.
  if (s > kTsirelsonBound + 1e-6) {
    throw std::logic_error("CHSH value exceeded the quantum bound");
  }
  return {c_ab,   c_ab_prime, c_a_prime_b, c_a_prime_b_prime,
          s,      s > 2.0,    settings};
}

ChshResult evaluate_chsh(
    const ChshSettings& settings,
    const std::function<double(double, double)>& correlation) {
  return assemble(settings, correlation(settings.a, settings.b),
                  correlation(settings.a, settings.b_prime),
                  correlation(settings.a_prime, settings.b),
                  correlation(settings.a_prime, settings.b_prime));
}

double dte_correlation_closed(const DteParams& params, double ell1,
                              double ell2) {
  const DteProbabilityBreakdown breakdown = dte_probability_gaussian(
      params, DteSettings(ell1, ell2), PortOutcome(+1, +1));
  return breakdown.modulation_amplitude * std::cos(breakdown.cosine_argument);
}

double dte_correlation_quadrature(const DteParams& params, double ell1,
                                  double ell2, const QuadratureSpec& spec) {
  const MomentumAmplitude pr = gaussian_pair_distribution(params);
  const QuadratureOutcomes outcomes =
      dte_quadrature_all_outcomes(pr, params, DteSettings(ell1, ell2), spec);
  return correlation_from_probabilities(outcomes.probability);
}

// Golden-section maximization of a smooth single-peak function on [lo, hi].
double golden_max(const std::function<double(double)>& f, double lo, double hi,
                  double x_tol) {
  constexpr double kInvPhi = 0.6180339887498948482;
  double a = lo;
  double b = hi;
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  while (b - a > x_tol) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = f(x1);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

ChshSettings ChshSettings::tbe_phases(double a, double a_prime, double b,
                                      double b_prime) {
  return {SettingsMode::kTbe, a, a_prime, b, b_prime};
}

ChshSettings ChshSettings::dte_offsets(double a, double a_prime, double b,
                                       double b_prime) {
  return {SettingsMode::kDte, a, a_prime, b, b_prime};
}

ChshSettings ChshSettings::tbe_maximal(double phi_tau) {
  const double half = 0.5 * phi_tau;
  return tbe_phases(half, half + 0.5 * kPi, half - 0.25 * kPi,
                    half + 0.25 * kPi);
}

double correlation_from_probabilities(const std::array<double, 4>& p) {
  double sum = 0.0;
  for (double value : p) {
    if (!(value >= 0.0)) {
      throw std::invalid_argument("probabilities must be nonnegative");
    }
    sum += value;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw std::invalid_argument("probabilities must sum to 1 within 1e-9");
  }
  return p[0] - p[1] - p[2] + p[3];
}

ChshResult chsh_tbe(double phi_tau, const ChshSettings& settings) {
  require_mode(settings, SettingsMode::kTbe, "chsh_tbe");
  const auto correlation = [&](double phi1, double phi2) {
    return tbe_correlation(TbeSettings(phi1, phi2, kQuarterPi, kQuarterPi),
                           phi_tau);
  };
  return evaluate_chsh(settings, correlation);
}

ChshResult chsh_dte(const DteParams& params, const ChshSettings& settings,
                    DteEngine engine, const QuadratureSpec& spec) {
  require_mode(settings, SettingsMode::kDte, "chsh_dte");
  if (engine == DteEngine::kClosedForm) {
    const auto correlation = [&](double ell1, double ell2) {
      return dte_correlation_closed(params, ell1, ell2);
    };
    return evaluate_chsh(settings, correlation);
  }
  const auto correlation = [&](double ell1, double ell2) {
    return dte_correlation_quadrature(params, ell1, ell2, spec);
  };
  return evaluate_chsh(settings, correlation);
}

ChshResult chsh_optimize_dte(const DteParams& params, DteEngine engine,
                             const QuadratureSpec& spec) {
  const double lambdabar = params.lambdabar_rel();
  const double matched_ell1 = 0.5 * params.tau() * params.v_rel();
  const double matched_ell2 = -matched_ell1;

  // The search window collapses if the Gaussian envelope is narrower than a
  // fringe; no grid can then see any modulation.
  const double width_rel =
      std::sqrt(2.0 * params.v_rel() * lambdabar * params.t_rel());
  const double width_cm =
      std::sqrt(2.0 * params.v_rel() * lambdabar * params.t_cm());
  if (std::min(width_rel, width_cm) < lambdabar) {
    throw OptimizationWindowError(
        "envelope scales are below one fringe period; no optimization window");
  }

  const int half_steps = static_cast<int>(std::lround(6.0 * kPi * 8.0));
  const double step = lambdabar / 8.0;
  const int n = 2 * half_steps + 1;

  // Correlation on the (side-1 offset, side-2 offset) grid around the
  // matched point.
  std::vector<double> grid(static_cast<std::size_t>(n) * n);
  std::vector<double> offsets(n);
  for (int i = 0; i < n; ++i) {
    offsets[i] = (i - half_steps) * step;
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      grid[static_cast<std::size_t>(i) * n + j] = dte_correlation_closed(
          params, matched_ell1 + offsets[i], matched_ell2 + offsets[j]);
    }
  }

  // S(a, a', b, b') is separable over a and a' once (b, b') is fixed:
  // max_a [C(a,b) + C(a,b')] + max_a' [C(a',b) - C(a',b')].
  double best_s = -std::numeric_limits<double>::infinity();
  int best_ia = 0, best_iap = 0, best_ib = 0, best_ibp = 0;
  for (int jb = 0; jb < n; ++jb) {
    for (int jbp = 0; jbp < n; ++jbp) {
      double best_sum = -std::numeric_limits<double>::infinity();
      double best_diff = -std::numeric_limits<double>::infinity();
      int arg_sum = 0, arg_diff = 0;
      for (int ia = 0; ia < n; ++ia) {
        const double c_b = grid[static_cast<std::size_t>(ia) * n + jb];
        const double c_bp = grid[static_cast<std::size_t>(ia) * n + jbp];
        if (c_b + c_bp > best_sum) {
          best_sum = c_b + c_bp;
          arg_sum = ia;
        }
        if (c_b - c_bp > best_diff) {
          best_diff = c_b - c_bp;
          arg_diff = ia;
        }
      }
      if (best_sum + best_diff > best_s) {
        best_s = best_sum + best_diff;
        best_ia = arg_sum;
        best_iap = arg_diff;
        best_ib = jb;
        best_ibp = jbp;
      }
    }
  }

  std::array<double, 4> setting = {
      matched_ell1 + offsets[best_ia], matched_ell1 + offsets[best_iap],
      matched_ell2 + offsets[best_ib], matched_ell2 + offsets[best_ibp]};

  // Refinement works on the signed combination; the grid stage always lands
  // on its positive branch.
  const auto s_of = [&](const std::array<double, 4>& x) {
    return dte_correlation_closed(params, x[0], x[2]) +
           dte_correlation_closed(params, x[0], x[3]) +
           dte_correlation_closed(params, x[1], x[2]) -
           dte_correlation_closed(params, x[1], x[3]);
  };

  const double x_tol = 1e-9 * lambdabar;
  for (int sweep = 0; sweep < 6; ++sweep) {
    for (int coord = 0; coord < 4; ++coord) {
      const auto line = [&](double x) {
        std::array<double, 4> probe = setting;
        probe[coord] = x;
        return s_of(probe);
      };
      setting[coord] = golden_max(line, setting[coord] - 2.0 * step,
                                  setting[coord] + 2.0 * step, x_tol);
    }
  }

  const ChshSettings final_settings = ChshSettings::dte_offsets(
      setting[0], setting[1], setting[2], setting[3]);
  return chsh_dte(params, final_settings, engine, spec);
}

FeasibilityReport feasibility_conditions(const DteParams& params,
                                         double fringe_threshold) {
  if (!(fringe_threshold > 0.0)) {
    throw std::invalid_argument("fringe threshold must be > 0");
  }
  FeasibilityReport report;
  report.threshold = fringe_threshold;
  const double tau = params.tau();
  if (tau == 0.0) {
    // No early/late separation: there is no fringe window near the matched
    // point to scan, so the condition is reported failed rather than
    // extrapolated.
    report.fringe_ratio = std::numeric_limits<double>::infinity();
    report.fringe_ok = false;
  } else {
    report.fringe_ratio = params.lambdabar_rel() / (tau * params.v_rel());
    report.fringe_ok = report.fringe_ratio < fringe_threshold;
  }
  const double r_cm = tau / params.t_cm();
  const double r_rel = tau / params.t_rel();
  report.visibility_product =
      (1.0 + r_cm * r_cm) * (1.0 + r_rel * r_rel);
  report.visibility_ok = report.visibility_product < 4.0;
  report.predicted_max_s =
      kTsirelsonBound * std::pow(report.visibility_product, -0.25);
  return report;
}

}  // namespace dtebell

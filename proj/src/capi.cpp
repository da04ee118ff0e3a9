#include "dtebell.h"

#include <complex>
#include <cstring>
#include <new>

#include "core/bell.hpp"
#include "core/constants.hpp"
#include "core/dte.hpp"
#include "core/errors.hpp"
#include "core/oracle.hpp"
#include "core/params.hpp"
#include "core/tbe.hpp"
#include "core/validation.hpp"

struct dtb_params {
  dtebell::DteParams value;
};

namespace {

template <typename F>
dtb_status wrap(F&& body) noexcept {
  try {
    return body();
  } catch (const dtebell::UnsupportedSplittingError&) {
    return DTB_ERR_UNSUPPORTED_SPLITTING;
  } catch (const dtebell::NormalizationError&) {
    return DTB_ERR_NOT_NORMALIZED;
  } catch (const dtebell::ToleranceNotReached&) {
    return DTB_ERR_TOLERANCE_NOT_REACHED;
  } catch (const dtebell::ModeMismatchError&) {
    return DTB_ERR_MODE_MISMATCH;
  } catch (const dtebell::OptimizationWindowError&) {
    return DTB_ERR_OPTIMIZATION_WINDOW;
  } catch (const std::invalid_argument&) {
    return DTB_ERR_INVALID_ARGUMENT;
  } catch (const std::bad_alloc&) {
    return DTB_ERR_INTERNAL;
  } catch (...) {
    return DTB_ERR_INTERNAL;
  }
}

dtebell::QuadratureSpec to_spec(const dtb_quadrature_spec* spec) {
  if (spec == nullptr) {
    return {};
  }
  dtebell::QuadratureSpec out;
  out.abs_tolerance = spec->abs_tolerance;
  out.max_depth = spec->max_depth;
  out.rule_points = spec->rule_points;
  out.max_panels = spec->max_panels;
  return out;
}

void fill_chsh(const dtebell::ChshResult& result, dtb_chsh_result* out) {
  out->c_ab = result.c_ab;
  out->c_ab_prime = result.c_ab_prime;
  out->c_a_prime_b = result.c_a_prime_b;
  out->c_a_prime_b_prime = result.c_a_prime_b_prime;
  out->s = result.s;
  out->violated = result.violated ? 1 : 0;
  out->a = result.settings.a;
  out->a_prime = result.settings.a_prime;
  out->b = result.settings.b;
  out->b_prime = result.settings.b_prime;
}

dtb_status quadrature_outcomes_to_c(const dtebell::QuadratureOutcomes& all,
                                    double probability[4],
                                    double error_estimate[4]) {
  for (int i = 0; i < 4; ++i) {
    probability[i] = all.probability[static_cast<std::size_t>(i)];
    error_estimate[i] = all.error_estimate[static_cast<std::size_t>(i)];
  }
  return all.converged ? DTB_OK : DTB_ERR_TOLERANCE_NOT_REACHED;
}

dtb_status run_quadrature(const dtebell::MomentumAmplitude& psi,
                          const dtb_params* params, double ell1, double ell2,
                          double theta1, double theta2,
                          const dtb_quadrature_spec* spec,
                          double probability[4], double error_estimate[4]) {
  const dtebell::DteSettings settings(ell1, ell2, theta1, theta2);
  const dtebell::QuadratureOutcomes all =
      dtebell::try_dte_quadrature_all_outcomes(psi, params->value, settings,
                                               to_spec(spec));
  return quadrature_outcomes_to_c(all, probability, error_estimate);
}

}  // namespace

extern "C" {

const char* dtb_status_name(dtb_status status) {
  switch (status) {
    case DTB_OK:
      return "ok";
    case DTB_ERR_INVALID_ARGUMENT:
      return "invalid argument";
    case DTB_ERR_UNSUPPORTED_SPLITTING:
      return "unsupported splitting ratio";
    case DTB_ERR_NOT_NORMALIZED:
      return "momentum distribution not normalized";
    case DTB_ERR_TOLERANCE_NOT_REACHED:
      return "quadrature tolerance not reached";
    case DTB_ERR_MODE_MISMATCH:
      return "settings mode mismatch";
    case DTB_ERR_OPTIMIZATION_WINDOW:
      return "no optimization window";
    case DTB_ERR_INTERNAL:
      return "internal error";
  }
  return "unknown status";
}

const char* dtb_version(void) { return "1.0.0"; }

dtb_status dtb_params_create(double mass_kg, double v_rel_m_per_s,
                             double sigma_p_cm_kg_m_per_s,
                             double sigma_p_rel_kg_m_per_s, double tau_s,
                             double phi_tau_rad, dtb_params** out) {
  if (out == nullptr) return DTB_ERR_INVALID_ARGUMENT;
  *out = nullptr;
  return wrap([&] {
    *out = new dtb_params{dtebell::DteParams(
        mass_kg, v_rel_m_per_s, sigma_p_cm_kg_m_per_s, sigma_p_rel_kg_m_per_s,
        tau_s, phi_tau_rad)};
    return DTB_OK;
  });
}

void dtb_params_destroy(dtb_params* params) { delete params; }

dtb_status dtb_derived_scales(const dtb_params* params, double* t_cm_s,
                              double* t_rel_s, double* lambdabar_rel_m) {
  if (params == nullptr || t_cm_s == nullptr || t_rel_s == nullptr ||
      lambdabar_rel_m == nullptr) {
    return DTB_ERR_INVALID_ARGUMENT;
  }
  return wrap([&] {
    const dtebell::DerivedScales scales = dtebell::derived_scales(params->value);
    *t_cm_s = scales.t_cm;
    *t_rel_s = scales.t_rel;
    *lambdabar_rel_m = scales.lambdabar_rel;
    return DTB_OK;
  });
}

dtb_status dtb_switch_distinguishability(const dtb_params* params,
                                         double t_arrival_s, double* ratio) {
  if (params == nullptr || ratio == nullptr) return DTB_ERR_INVALID_ARGUMENT;
  return wrap([&] {
    *ratio = dtebell::switch_distinguishability(params->value, t_arrival_s);
    return DTB_OK;
  });
}

dtb_status dtb_tbe_amplitude(int sigma1, int sigma2, double phi1, double phi2,
                             double theta1, double theta2, double phi_tau,
                             double* re, double* im) {
  if (re == nullptr || im == nullptr) return DTB_ERR_INVALID_ARGUMENT;
  return wrap([&] {
    const std::complex<double> amplitude = dtebell::tbe_amplitude(
        dtebell::PortOutcome(sigma1, sigma2),
        dtebell::TbeSettings(phi1, phi2, theta1, theta2), phi_tau);
    *re = amplitude.real();
    *im = amplitude.imag();
    return DTB_OK;
  });
}

dtb_status dtb_tbe_probability(int sigma1, int sigma2, double phi1,
                               double phi2, double theta1, double theta2,
                               double phi_tau, double* probability) {
  if (probability == nullptr) return DTB_ERR_INVALID_ARGUMENT;
  return wrap([&] {
    *probability = dtebell::tbe_probability(
        dtebell::PortOutcome(sigma1, sigma2),
        dtebell::TbeSettings(phi1, phi2, theta1, theta2), phi_tau);
    return DTB_OK;
  });
}

dtb_status dtb_tbe_correlation(double phi1, double phi2, double theta1,
                               double theta2, double phi_tau,
                               double* correlation) {
  if (correlation == nullptr) return DTB_ERR_INVALID_ARGUMENT;
  return wrap([&] {
    *correlation = dtebell::tbe_correlation(
        dtebell::TbeSettings(phi1, phi2, theta1, theta2), phi_tau);
    return DTB_OK;
  });
}

dtb_status dtb_measurement_axis(double theta, double phi, double axis[3]) {
  if (axis == nullptr) return DTB_ERR_INVALID_ARGUMENT;
  return wrap([&] {
    const dtebell::MeasurementAxis n =
        dtebell::MeasurementAxis::from_angles(theta, phi);
    axis[0] = n.nx;
    axis[1] = n.ny;
    axis[2] = n.nz;
    return DTB_OK;
  });
}

dtb_status dtb_spin_correlation(const double axis1[3], const double axis2[3],
                                double phi_tau, double* correlation) {
  if (axis1 == nullptr || axis2 == nullptr || correlation == nullptr) {
    return DTB_ERR_INVALID_ARGUMENT;
  }
  return wrap([&] {
    *correlation = dtebell::spin_correlation(
        dtebell::MeasurementAxis(axis1[0], axis1[1], axis1[2]),
        dtebell::MeasurementAxis(axis2[0], axis2[1], axis2[2]), phi_tau);
    return DTB_OK;
  });
}

dtb_status dtb_dte_probability(const dtb_params* params, double ell1_m,
                               double ell2_m, int sigma1, int sigma2,
                               dtb_dte_breakdown* out) {
  if (params == nullptr || out == nullptr) return DTB_ERR_INVALID_ARGUMENT;
  return wrap([&] {
    const dtebell::DteProbabilityBreakdown breakdown =
        dtebell::dte_probability_gaussian(
            params->value, dtebell::DteSettings(ell1_m, ell2_m),
            dtebell::PortOutcome(sigma1, sigma2));
    out->total = breakdown.total;
    out->modulation_amplitude = breakdown.modulation_amplitude;
    out->cosine_argument = breakdown.cosine_argument;
    out->phi0 = breakdown.phi0;
    return DTB_OK;
  });
}

dtb_status dtb_dte_visibility(const dtb_params* params, double ell_sum_m,
                              double ell_diff_m, double* visibility) {
  if (params == nullptr || visibility == nullptr) {
    return DTB_ERR_INVALID_ARGUMENT;
  }
  return wrap([&] {
    *visibility =
        dtebell::dte_visibility(params->value, ell_sum_m, ell_diff_m);
    return DTB_OK;
  });
}

dtb_status dtb_dte_fringe_scan(const dtb_params* params, double ell2_m,
                               double ell1_start_m, double ell1_stop_m,
                               int count, dtb_fringe_row* rows) {
  if (params == nullptr || rows == nullptr) return DTB_ERR_INVALID_ARGUMENT;
  return wrap([&] {
    const std::vector<dtebell::FringeSample> samples = dtebell::dte_fringe_scan(
        params->value, ell2_m, ell1_start_m, ell1_stop_m, count);
    for (std::size_t i = 0; i < samples.size(); ++i) {
      rows[i].ell1 = samples[i].ell1;
      rows[i].p_pp = samples[i].p_pp;
      rows[i].p_pm = samples[i].p_pm;
      rows[i].p_mp = samples[i].p_mp;
      rows[i].p_mm = samples[i].p_mm;
      rows[i].visibility = samples[i].visibility;
      rows[i].cosine_argument = samples[i].cosine_argument;
      rows[i].engine_error = 0.0;
    }
    return DTB_OK;
  });
}

void dtb_quadrature_spec_default(dtb_quadrature_spec* spec) {
  if (spec == nullptr) return;
  const dtebell::QuadratureSpec defaults;
  spec->abs_tolerance = defaults.abs_tolerance;
  spec->max_depth = defaults.max_depth;
  spec->rule_points = defaults.rule_points;
  spec->max_panels = defaults.max_panels;
}

dtb_status dtb_dte_quadrature_gaussian(const dtb_params* params, double ell1_m,
                                       double ell2_m, double theta1,
                                       double theta2,
                                       const dtb_quadrature_spec* spec,
                                       double probability[4],
                                       double error_estimate[4]) {
  if (params == nullptr || probability == nullptr ||
      error_estimate == nullptr) {
    return DTB_ERR_INVALID_ARGUMENT;
  }
  return wrap([&] {
    const dtebell::MomentumAmplitude psi =
        dtebell::gaussian_pair_distribution(params->value);
    return run_quadrature(psi, params, ell1_m, ell2_m, theta1, theta2, spec,
                          probability, error_estimate);
  });
}

dtb_status dtb_dte_quadrature_distribution(
    const dtb_params* params, double ell1_m, double ell2_m, double theta1,
    double theta2, dtb_distribution_fn pr, void* user_data, double p1_min,
    double p1_max, double p2_min, double p2_max,
    const dtb_quadrature_spec* spec, double probability[4],
    double error_estimate[4]) {
  if (params == nullptr || pr == nullptr || probability == nullptr ||
      error_estimate == nullptr) {
    return DTB_ERR_INVALID_ARGUMENT;
  }
  return wrap([&] {
    const dtebell::SupportBox box{p1_min, p1_max, p2_min, p2_max};
    const dtebell::MomentumAmplitude psi =
        dtebell::MomentumAmplitude::from_distribution(
            [pr, user_data](double p1, double p2) {
              return pr(p1, p2, user_data);
            },
            box);
    return run_quadrature(psi, params, ell1_m, ell2_m, theta1, theta2, spec,
                          probability, error_estimate);
  });
}

dtb_status dtb_dte_quadrature_amplitude(
    const dtb_params* params, double ell1_m, double ell2_m, double theta1,
    double theta2, dtb_amplitude_fn psi_fn, void* user_data, double p1_min,
    double p1_max, double p2_min, double p2_max,
    const dtb_quadrature_spec* spec, double probability[4],
    double error_estimate[4]) {
  if (params == nullptr || psi_fn == nullptr || probability == nullptr ||
      error_estimate == nullptr) {
    return DTB_ERR_INVALID_ARGUMENT;
  }
  return wrap([&] {
    const dtebell::SupportBox box{p1_min, p1_max, p2_min, p2_max};
    const dtebell::MomentumAmplitude psi =
        dtebell::MomentumAmplitude::from_amplitude(
            [psi_fn, user_data](double p1, double p2) {
              double re = 0.0;
              double im = 0.0;
              psi_fn(p1, p2, user_data, &re, &im);
              return std::complex<double>(re, im);
            },
            box);
    return run_quadrature(psi, params, ell1_m, ell2_m, theta1, theta2, spec,
                          probability, error_estimate);
  });
}

dtb_status dtb_correlation_from_probabilities(const double probability[4],
                                              double* correlation) {
  if (probability == nullptr || correlation == nullptr) {
    return DTB_ERR_INVALID_ARGUMENT;
  }
  return wrap([&] {
    *correlation = dtebell::correlation_from_probabilities(
        {probability[0], probability[1], probability[2], probability[3]});
    return DTB_OK;
  });
}

dtb_status dtb_chsh_tbe(double phi_tau, double a, double a_prime, double b,
                        double b_prime, dtb_chsh_result* out) {
  if (out == nullptr) return DTB_ERR_INVALID_ARGUMENT;
  return wrap([&] {
    fill_chsh(dtebell::chsh_tbe(phi_tau, dtebell::ChshSettings::tbe_phases(
                                             a, a_prime, b, b_prime)),
              out);
    return DTB_OK;
  });
}

dtb_status dtb_chsh_tbe_maximal(double phi_tau, dtb_chsh_result* out) {
  if (out == nullptr) return DTB_ERR_INVALID_ARGUMENT;
  return wrap([&] {
    fill_chsh(
        dtebell::chsh_tbe(phi_tau, dtebell::ChshSettings::tbe_maximal(phi_tau)),
        out);
    return DTB_OK;
  });
}

dtb_status dtb_chsh_dte(const dtb_params* params, double a, double a_prime,
                        double b, double b_prime, dtb_engine engine,
                        const dtb_quadrature_spec* spec,
                        dtb_chsh_result* out) {
  if (params == nullptr || out == nullptr) return DTB_ERR_INVALID_ARGUMENT;
  return wrap([&] {
    const dtebell::DteEngine core_engine = engine == DTB_ENGINE_QUADRATURE
                                               ? dtebell::DteEngine::kQuadrature
                                               : dtebell::DteEngine::kClosedForm;
    fill_chsh(dtebell::chsh_dte(
                  params->value,
                  dtebell::ChshSettings::dte_offsets(a, a_prime, b, b_prime),
                  core_engine, to_spec(spec)),
              out);
    return DTB_OK;
  });
}

dtb_status dtb_chsh_optimize_dte(const dtb_params* params, dtb_engine engine,
                                 const dtb_quadrature_spec* spec,
                                 dtb_chsh_result* out) {
  if (params == nullptr || out == nullptr) return DTB_ERR_INVALID_ARGUMENT;
  return wrap([&] {
    const dtebell::DteEngine core_engine = engine == DTB_ENGINE_QUADRATURE
                                               ? dtebell::DteEngine::kQuadrature
                                               : dtebell::DteEngine::kClosedForm;
    fill_chsh(
        dtebell::chsh_optimize_dte(params->value, core_engine, to_spec(spec)),
        out);
    return DTB_OK;
  });
}

dtb_status dtb_feasibility_conditions(const dtb_params* params,
                                      double fringe_threshold,
                                      dtb_feasibility* out) {
  if (params == nullptr || out == nullptr) return DTB_ERR_INVALID_ARGUMENT;
  return wrap([&] {
    const dtebell::FeasibilityReport report =
        dtebell::feasibility_conditions(params->value, fringe_threshold);
    out->fringe_ok = report.fringe_ok ? 1 : 0;
    out->fringe_ratio = report.fringe_ratio;
    out->visibility_ok = report.visibility_ok ? 1 : 0;
    out->visibility_product = report.visibility_product;
    out->predicted_max_s = report.predicted_max_s;
    out->threshold = report.threshold;
    return DTB_OK;
  });
}

dtb_status dtb_validate_run(uint64_t seed, int draws, double tolerance,
                            const dtb_quadrature_spec* spec,
                            dtb_validation_row* rows,
                            dtb_validation_summary* summary) {
  if (summary == nullptr) return DTB_ERR_INVALID_ARGUMENT;
  return wrap([&] {
    const dtebell::ValidationReport report =
        dtebell::run_closed_form_validation(draws, seed, tolerance,
                                            to_spec(spec));
    if (rows != nullptr) {
      for (std::size_t i = 0; i < report.rows.size(); ++i) {
        const dtebell::ValidationRow& row = report.rows[i];
        rows[i].mass = row.mass;
        rows[i].v_rel = row.v_rel;
        rows[i].sigma_p_cm = row.sigma_p_cm;
        rows[i].sigma_p_rel = row.sigma_p_rel;
        rows[i].tau = row.tau;
        rows[i].phi_tau = row.phi_tau;
        rows[i].ell1 = row.ell1;
        rows[i].ell2 = row.ell2;
        for (int k = 0; k < 4; ++k) {
          rows[i].p_closed[k] = row.p_closed[static_cast<std::size_t>(k)];
          rows[i].p_quadrature[k] =
              row.p_quadrature[static_cast<std::size_t>(k)];
          rows[i].quadrature_error[k] =
              row.quadrature_error[static_cast<std::size_t>(k)];
        }
        rows[i].max_abs_deviation = row.max_abs_deviation;
      }
    }
    summary->seed = report.seed;
    summary->draws = report.draws;
    summary->tolerance = report.tolerance;
    summary->max_abs_deviation = report.max_abs_deviation;
    summary->pass = report.pass ? 1 : 0;
    return DTB_OK;
  });
}

}  // extern "C"

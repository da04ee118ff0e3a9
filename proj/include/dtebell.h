/* dtebell: Bell tests on time-bin and dissociation-time entangled
 * matter-wave pairs behind switched asymmetric Mach-Zehnder
 * interferometers.
 *
 * C API of the shared library. All functions return a dtb_status; outputs
 * are written through pointers only on DTB_OK unless noted otherwise.
 * Handles are opaque and must be released with their destroy function.
 * Inputs are SI units and radians throughout. Port-outcome arrays are
 * ordered (+,+), (+,-), (-,+), (-,-).
 */
#ifndef DTEBELL_H
#define DTEBELL_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dtb_status {
  DTB_OK = 0,
  DTB_ERR_INVALID_ARGUMENT = 1,
  DTB_ERR_UNSUPPORTED_SPLITTING = 2,
  DTB_ERR_NOT_NORMALIZED = 3,
  DTB_ERR_TOLERANCE_NOT_REACHED = 4,
  DTB_ERR_MODE_MISMATCH = 5,
  DTB_ERR_OPTIMIZATION_WINDOW = 6,
  DTB_ERR_INTERNAL = 7
} dtb_status;

const char* dtb_status_name(dtb_status status);
const char* dtb_version(void);

/* ---- scenario parameters ------------------------------------------- */

typedef struct dtb_params dtb_params;

/* mass > 0, v_rel > 0, both momentum spreads > 0, tau >= 0. */
dtb_status dtb_params_create(double mass_kg, double v_rel_m_per_s,
                             double sigma_p_cm_kg_m_per_s,
                             double sigma_p_rel_kg_m_per_s, double tau_s,
                             double phi_tau_rad, dtb_params** out);
void dtb_params_destroy(dtb_params* params);

/* T_cm = 2 m hbar/sigma_p_cm^2, T_rel = m hbar/(2 sigma_p_rel^2),
 * lambdabar_rel = 2 hbar/(m v_rel). */
dtb_status dtb_derived_scales(const dtb_params* params, double* t_cm_s,
                              double* t_rel_s, double* lambdabar_rel_m);

/* Early/late separation over the dispersed single-particle width at the
 * switch. */
dtb_status dtb_switch_distinguishability(const dtb_params* params,
                                         double t_arrival_s, double* ratio);

/* ---- time-bin (TBE) analysis --------------------------------------- */

dtb_status dtb_tbe_amplitude(int sigma1, int sigma2, double phi1, double phi2,
                             double theta1, double theta2, double phi_tau,
                             double* re, double* im);
dtb_status dtb_tbe_probability(int sigma1, int sigma2, double phi1,
                               double phi2, double theta1, double theta2,
                               double phi_tau, double* probability);
dtb_status dtb_tbe_correlation(double phi1, double phi2, double theta1,
                               double theta2, double phi_tau,
                               double* correlation);

/* Bloch measurement axis realized by (theta, phi). */
dtb_status dtb_measurement_axis(double theta, double phi, double axis[3]);
dtb_status dtb_spin_correlation(const double axis1[3], const double axis2[3],
                                double phi_tau, double* correlation);

/* ---- DTE closed form ------------------------------------------------ */

typedef struct dtb_dte_breakdown {
  double total;
  double modulation_amplitude;
  double cosine_argument;
  double phi0;
} dtb_dte_breakdown;

/* Symmetric splitters only; DTB_ERR_UNSUPPORTED_SPLITTING otherwise is
 * raised by the quadrature-free closed form when theta != pi/4 (the
 * closed-form entry points below fix theta = pi/4). */
dtb_status dtb_dte_probability(const dtb_params* params, double ell1_m,
                               double ell2_m, int sigma1, int sigma2,
                               dtb_dte_breakdown* out);
dtb_status dtb_dte_visibility(const dtb_params* params, double ell_sum_m,
                              double ell_diff_m, double* visibility);

typedef struct dtb_fringe_row {
  double ell1;
  double p_pp;
  double p_pm;
  double p_mp;
  double p_mm;
  double visibility;
  double cosine_argument;
  double engine_error;
} dtb_fringe_row;

/* Fills rows[0..count-1] on the uniform ell1 grid; count >= 2. */
dtb_status dtb_dte_fringe_scan(const dtb_params* params, double ell2_m,
                               double ell1_start_m, double ell1_stop_m,
                               int count, dtb_fringe_row* rows);

/* ---- momentum-space quadrature -------------------------------------- */

typedef struct dtb_quadrature_spec {
  double abs_tolerance;
  int max_depth;
  int rule_points; /* 15 or 21 */
  size_t max_panels;
} dtb_quadrature_spec;

void dtb_quadrature_spec_default(dtb_quadrature_spec* spec);

/* Probabilities for all four port combinations of the Gaussian scenario by
 * adaptive momentum quadrature; general splitting angles allowed. On
 * DTB_ERR_TOLERANCE_NOT_REACHED the best estimates are still written. */
dtb_status dtb_dte_quadrature_gaussian(const dtb_params* params, double ell1_m,
                                       double ell2_m, double theta1,
                                       double theta2,
                                       const dtb_quadrature_spec* spec,
                                       double probability[4],
                                       double error_estimate[4]);

typedef double (*dtb_distribution_fn)(double p1, double p2, void* user_data);
typedef void (*dtb_amplitude_fn)(double p1, double p2, void* user_data,
                                 double* re, double* im);

/* Same quadrature for a caller-supplied momentum distribution pr(p1,p2)
 * (nonnegative, normalized to 1 over the support box). */
dtb_status dtb_dte_quadrature_distribution(
    const dtb_params* params, double ell1_m, double ell2_m, double theta1,
    double theta2, dtb_distribution_fn pr, void* user_data, double p1_min,
    double p1_max, double p2_min, double p2_max,
    const dtb_quadrature_spec* spec, double probability[4],
    double error_estimate[4]);

/* Same for a complex amplitude psi(p1,p2) with |psi|^2 the distribution. */
dtb_status dtb_dte_quadrature_amplitude(
    const dtb_params* params, double ell1_m, double ell2_m, double theta1,
    double theta2, dtb_amplitude_fn psi, void* user_data, double p1_min,
    double p1_max, double p2_min, double p2_max,
    const dtb_quadrature_spec* spec, double probability[4],
    double error_estimate[4]);

/* ---- CHSH ------------------------------------------------------------ */

typedef enum dtb_engine {
  DTB_ENGINE_CLOSED_FORM = 0,
  DTB_ENGINE_QUADRATURE = 1
} dtb_engine;

typedef struct dtb_chsh_result {
  double c_ab;
  double c_ab_prime;
  double c_a_prime_b;
  double c_a_prime_b_prime;
  double s;
  int violated;
  double a;
  double a_prime;
  double b;
  double b_prime;
} dtb_chsh_result;

/* Sum of sigma1*sigma2*p over probabilities ordered as documented above. */
dtb_status dtb_correlation_from_probabilities(const double probability[4],
                                              double* correlation);

/* Settings are phases (radians); symmetric splitters. */
dtb_status dtb_chsh_tbe(double phi_tau, double a, double a_prime, double b,
                        double b_prime, dtb_chsh_result* out);
/* The maximally violating phase choices for the given state phase. */
dtb_status dtb_chsh_tbe_maximal(double phi_tau, dtb_chsh_result* out);

/* Settings are arm-length offsets (meters). spec may be NULL for the
 * closed-form engine. */
dtb_status dtb_chsh_dte(const dtb_params* params, double a, double a_prime,
                        double b, double b_prime, dtb_engine engine,
                        const dtb_quadrature_spec* spec, dtb_chsh_result* out);
dtb_status dtb_chsh_optimize_dte(const dtb_params* params, dtb_engine engine,
                                 const dtb_quadrature_spec* spec,
                                 dtb_chsh_result* out);

typedef struct dtb_feasibility {
  int fringe_ok;
  double fringe_ratio; /* infinity at tau = 0: no fringe window */
  int visibility_ok;
  double visibility_product;
  double predicted_max_s;
  double threshold;
} dtb_feasibility;

dtb_status dtb_feasibility_conditions(const dtb_params* params,
                                      double fringe_threshold,
                                      dtb_feasibility* out);

/* ---- closed-form vs quadrature validation ---------------------------- */

typedef struct dtb_validation_row {
  double mass;
  double v_rel;
  double sigma_p_cm;
  double sigma_p_rel;
  double tau;
  double phi_tau;
  double ell1;
  double ell2;
  double p_closed[4];
  double p_quadrature[4];
  double quadrature_error[4];
  double max_abs_deviation;
} dtb_validation_row;

typedef struct dtb_validation_summary {
  uint64_t seed;
  int draws;
  double tolerance;
  double max_abs_deviation;
  int pass;
} dtb_validation_summary;

/* Seeded random Gaussian scenarios, closed form against quadrature.
 * rows may be NULL; otherwise it must hold `draws` entries. The summary
 * pass flag is data, not an error: the call returns DTB_OK either way. */
dtb_status dtb_validate_run(uint64_t seed, int draws, double tolerance,
                            const dtb_quadrature_spec* spec,
                            dtb_validation_row* rows,
                            dtb_validation_summary* summary);

#ifdef __cplusplus
}
#endif

#endif /* DTEBELL_H */

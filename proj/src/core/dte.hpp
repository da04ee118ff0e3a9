#pragma once

#include <vector>

#include "core/params.hpp"
#include "core/tbe.hpp"

namespace dtebell {

// Arm-length offsets of the two interferometers (the displacement the early
// wave packet picks up relative to the late one) and the splitting angles.
struct DteSettings {
  double ell1;
  double ell2;
  double theta1;
  double theta2;

  DteSettings(double ell1, double ell2, double theta1 = kQuarterPi,
              double theta2 = kQuarterPi);

  bool symmetric_splitters() const;

  static constexpr double kQuarterPi = 0.7853981633974483096156608458198757;
};

// One evaluation of the closed-form Gaussian detection probability,
// decomposed into the pieces that make it up:
//   total = (1/4) [1 + sigma1 sigma2 * modulation_amplitude * cos(cosine_argument)]
// modulation_amplitude is the product of the two Lorentzian dispersion
// factors and the Gaussian envelope-mismatch factor, and phi0 is the global
// fringe offset
//   phi0 = tau v_rel/lambdabar + arctan(tau/T_cm) + arctan(tau/T_rel) + 2 phi_tau.
struct DteProbabilityBreakdown {
  double total;
  double modulation_amplitude;
  double cosine_argument;
  double phi0;
};

// Closed-form joint detection probability for a Gaussian pair state.
// Only derived for symmetric splitters; throws UnsupportedSplittingError
// for theta != pi/4. All length/time groups are evaluated dimensionlessly
// (tau/T, ell/lambdabar, ell^2/(2 v lambdabar T)) to keep SI-scale inputs
// well conditioned.
DteProbabilityBreakdown dte_probability_gaussian(const DteParams& params,
                                                 const DteSettings& settings,
                                                 const PortOutcome& outcome);

// Modulation amplitude at ell1+ell2 = ell_sum, ell1-ell2 = ell_diff. In the
// slow-envelope regime this is the local fringe visibility
// (P_max - P_min)/(P_max + P_min).
double dte_visibility(const DteParams& params, double ell_sum,
                      double ell_diff);

struct FringeSample {
  double ell1;
  double p_pp;
  double p_pm;
  double p_mp;
  double p_mm;
  double visibility;
  double cosine_argument;
};

// Evaluates the closed form on a uniform ell1 grid at fixed ell2.
// count >= 2 and start < stop; rows come back in ascending ell1 order.
std::vector<FringeSample> dte_fringe_scan(const DteParams& params, double ell2,
                                          double start, double stop,
                                          int count);

}  // namespace dtebell

#pragma once

#include <array>

#include "core/oracle.hpp"
#include "core/params.hpp"

namespace dtebell {

enum class SettingsMode { kTbe, kDte };
enum class DteEngine { kClosedForm, kQuadrature };

// The two measurement settings per side of a CHSH run: phases (radians) in
// TBE mode, arm-length offsets (meters) in DTE mode. All four share one
// mode.
struct ChshSettings {
  SettingsMode mode;
  double a;
  double a_prime;
  double b;
  double b_prime;

  static ChshSettings tbe_phases(double a, double a_prime, double b,
                                 double b_prime);
  static ChshSettings dte_offsets(double a, double a_prime, double b,
                                  double b_prime);
  // The maximally violating phase choices for state phase phi_tau:
  //   a = phi/2, b = phi/2 - pi/4, a' = phi/2 + pi/2, b' = phi/2 + pi/4.
  static ChshSettings tbe_maximal(double phi_tau);
};

struct ChshResult {
  double c_ab;
  double c_ab_prime;
  double c_a_prime_b;
  double c_a_prime_b_prime;
  double s;  // |C(a,b) + C(a,b') + C(a',b) - C(a',b')|
  bool violated;
  ChshSettings settings;
};

// Sum of sigma1*sigma2*P over probabilities ordered (+,+), (+,-), (-,+),
// (-,-). Throws unless the probabilities are nonnegative and sum to 1
// within 1e-9.
double correlation_from_probabilities(const std::array<double, 4>& p);

ChshResult chsh_tbe(double phi_tau, const ChshSettings& settings);

ChshResult chsh_dte(const DteParams& params, const ChshSettings& settings,
                    DteEngine engine = DteEngine::kClosedForm,
                    const QuadratureSpec& spec = {});

// Deterministic maximization of S over the four arm offsets: a coarse grid
// at lambdabar/8 resolution spanning +/-3 fringe periods around the matched
// point per side, followed by golden-section refinement per coordinate.
// With the quadrature engine the search runs on the closed form and only
// the final correlations are recomputed by quadrature.
ChshResult chsh_optimize_dte(const DteParams& params,
                             DteEngine engine = DteEngine::kClosedForm,
                             const QuadratureSpec& spec = {});

struct FeasibilityReport {
  bool fringe_ok;            // lambdabar/(tau v_rel) below threshold
  double fringe_ratio;       // infinite at tau = 0 (no fringe window)
  bool visibility_ok;        // (1+(tau/T_cm)^2)(1+(tau/T_rel)^2) < 4
  double visibility_product;
  double predicted_max_s;    // 2 sqrt 2 * product^(-1/4)
  double threshold;
};

// Evaluates the two benchmark conditions for a Bell violation. The default
// operational reading of "<< 1" is < 0.01.
FeasibilityReport feasibility_conditions(const DteParams& params,
                                         double fringe_threshold = 0.01);

}  // namespace dtebell

#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <functional>

#include "core/dte.hpp"
#include "core/params.hpp"
#include "core/tbe.hpp"

namespace dtebell {

struct SupportBox {
  double p1_min;
  double p1_max;
  double p2_min;
  double p2_max;
};

// Two-particle momentum-space description of the single-pulse pair state:
// either a complex amplitude psi(p1, p2) or, for nonpure/nonseparable
// states, the nonnegative distribution pr(p1, p2) directly. Integration is
// confined to the finite support box, over which the state must be
// normalized to 1 within 1e-6.
class MomentumAmplitude {
 public:
  using AmplitudeFn = std::function<std::complex<double>(double, double)>;
  using DistributionFn = std::function<double(double, double)>;

  static MomentumAmplitude from_amplitude(AmplitudeFn psi, const SupportBox& box);
  static MomentumAmplitude from_distribution(DistributionFn pr,
                                             const SupportBox& box);

  bool is_distribution() const { return is_distribution_; }
  const SupportBox& box() const { return box_; }

  // |psi|^2, or the distribution value itself.
  double pr(double p1, double p2) const;

  const AmplitudeFn& amplitude() const { return amplitude_; }

 private:
  MomentumAmplitude(AmplitudeFn amp, DistributionFn dist, bool is_distribution,
                    const SupportBox& box);

  AmplitudeFn amplitude_;
  DistributionFn distribution_;
  bool is_distribution_;
  SupportBox box_;
};

// The Gaussian pair distribution with center-of-mass spread sigma_p_cm and
// relative spread sigma_p_rel around mean relative momentum m*v_rel,
// boxed at mean +/- 8 standard deviations per coordinate.
MomentumAmplitude gaussian_pair_distribution(const DteParams& params);

struct QuadratureSpec {
  double abs_tolerance = 1e-9;
  int max_depth = 30;
  int rule_points = 15;
  std::size_t max_panels = 400000;

  // Throws std::invalid_argument on a nonsensical spec.
  void validate() const;
};

struct QuadratureProbability {
  double probability;
  double error_estimate;
};

// Probabilities for all four port combinations in the order
// (+,+), (+,-), (-,+), (-,-), sharing one quadrature pass.
struct QuadratureOutcomes {
  std::array<double, 4> probability;
  std::array<double, 4> error_estimate;
  double norm;
  double norm_error;
  std::size_t panels;
  std::size_t evaluations;
  bool converged;
};

// Brute-force evaluation of the detection probability by adaptive 2-D
// momentum quadrature. The integrand is the port-projected two-branch
// amplitude combination
//   |(1/sqrt 2) [e^{i(p.l/hbar - p^2 tau/2 m hbar)} f1 f2
//                 + e^{i phi_tau} g1 g2]|^2 pr(p1, p2)
// which for symmetric splitters reduces to
//   P = (1/4)[1 + s1 s2 Re{e^{-i phi_tau} Int pr e^{i p.l/hbar}
//                          e^{-i p^2 tau/2 m hbar}}].
// General splitting angles are allowed. Throws NormalizationError if the
// state does not integrate to 1 over the box, and ToleranceNotReached
// (carrying the best estimate) if the panel budget runs out.
QuadratureOutcomes dte_quadrature_all_outcomes(const MomentumAmplitude& psi,
                                               const DteParams& params,
                                               const DteSettings& settings,
                                               const QuadratureSpec& spec);

// As above but reports non-convergence through the converged flag instead
// of throwing, so callers can still read the best estimates.
QuadratureOutcomes try_dte_quadrature_all_outcomes(const MomentumAmplitude& psi,
                                                   const DteParams& params,
                                                   const DteSettings& settings,
                                                   const QuadratureSpec& spec);

QuadratureProbability dte_probability_quadrature(const MomentumAmplitude& psi,
                                                 const DteParams& params,
                                                 const DteSettings& settings,
                                                 const PortOutcome& outcome,
                                                 const QuadratureSpec& spec);

// Recomputes the detection probability after multiplying the amplitude by
// e^{i xi(p1,p2)} and returns |delta P|. The detection probability depends
// on the state only through pr, so the deviation is bounded by the
// quadrature error; this covers rigid source displacements and extra free
// flight, which are momentum phases.
double momentum_phase_invariance_check(
    const MomentumAmplitude& psi,
    const std::function<double(double, double)>& xi, const DteParams& params,
    const DteSettings& settings, const PortOutcome& outcome,
    const QuadratureSpec& spec);

// Compares P against the run with the parity-reflected, particle-exchanged
// distribution pr'(p1,p2) = pr(-p2,-p1) and exchanged settings/outcomes;
// returns the largest |difference| over the four outcomes. Zero (up to
// quadrature error) whenever pr has the reflection symmetry.
double parity_symmetry_check(const MomentumAmplitude& psi,
                             const DteParams& params,
                             const DteSettings& settings,
                             const QuadratureSpec& spec);

}  // namespace dtebell

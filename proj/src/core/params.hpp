#pragma once

namespace dtebell {

struct DerivedScales {
  double t_cm;           // center-of-mass dispersion time, s
  double t_rel;          // relative-motion dispersion time, s
  double lambdabar_rel;  // reduced relative de Broglie wavelength, m
};

// Physical scenario for a dissociation-time-entangled pair: two equal-mass
// particles counterpropagating with mean relative velocity v_rel, Gaussian
// momentum spreads sigma_p_cm / sigma_p_rel for the center-of-mass and
// relative coordinates, and a delay tau (with phase phi_tau) between the two
// dissociation pulses.
//
// Immutable after construction; all derived scales are plain arithmetic on
// the stored fields.
class DteParams {
 public:
  // Throws std::invalid_argument unless mass, v_rel and both spreads are
  // positive, tau >= 0, and every field is finite.
  DteParams(double mass, double v_rel, double sigma_p_cm, double sigma_p_rel,
            double tau, double phi_tau);

  double mass() const { return mass_; }
  double v_rel() const { return v_rel_; }
  double sigma_p_cm() const { return sigma_p_cm_; }
  double sigma_p_rel() const { return sigma_p_rel_; }
  double tau() const { return tau_; }
  double phi_tau() const { return phi_tau_; }

  // Mean relative momentum per particle, m*v_rel/2.
  double p0_rel() const;
  // hbar / p0_rel; the fringe period in arm-length offset is 2*pi times this.
  double lambdabar_rel() const;
  // 2*m*hbar / sigma_p_cm^2.
  double t_cm() const;
  // m*hbar / (2*sigma_p_rel^2).
  double t_rel() const;

 private:
  double mass_;
  double v_rel_;
  double sigma_p_cm_;
  double sigma_p_rel_;
  double tau_;
  double phi_tau_;
};

DerivedScales derived_scales(const DteParams& params);

// Ratio of the early/late single-arm separation s = (v_rel/2)*tau to the
// dispersed single-particle width sigma_x(t) = sigma_x0*sqrt(1+(t/T)^2),
// with sigma_x0 = hbar/(2*sigma_p_rel) for a minimum-uncertainty packet.
// A ratio >> 1 means the switchable mirror can tell early from late.
double switch_distinguishability(const DteParams& params, double t_arrival);

}  // namespace dtebell

#include "core/params.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "core/constants.hpp"

namespace dtebell {

namespace {

void require_finite(double value, const char* name) {
  if (!std::isfinite(value)) {
    throw std::invalid_argument(std::string(name) + " must be finite");
  }
}

void require_positive(double value, const char* name) {
  require_finite(value, name);
  if (value <= 0.0) {
    throw std::invalid_argument(std::string(name) + " must be > 0");
  }
}

}  // namespace

DteParams::DteParams(double mass, double v_rel, double sigma_p_cm,
                     double sigma_p_rel, double tau, double phi_tau)
    : mass_(mass),
      v_rel_(v_rel),
      sigma_p_cm_(sigma_p_cm),
      sigma_p_rel_(sigma_p_rel),
      tau_(tau),
      phi_tau_(phi_tau) {
  require_positive(mass, "mass");
  require_positive(v_rel, "v_rel");
  require_positive(sigma_p_cm, "sigma_p_cm");
  require_positive(sigma_p_rel, "sigma_p_rel");
  require_finite(tau, "tau");
  if (tau < 0.0) {
    throw std::invalid_argument("tau must be >= 0");
  }
  require_finite(phi_tau, "phi_tau");
}

double DteParams::p0_rel() const { return 0.5 * mass_ * v_rel_; }

double DteParams::lambdabar_rel() const { return kHbar / p0_rel(); }

double DteParams::t_cm() const {
  return 2.0 * mass_ * kHbar / (sigma_p_cm_ * sigma_p_cm_);
}

double DteParams::t_rel() const {
  return mass_ * kHbar / (2.0 * sigma_p_rel_ * sigma_p_rel_);
}

DerivedScales derived_scales(const DteParams& params) {
  return {params.t_cm(), params.t_rel(), params.lambdabar_rel()};
}

double switch_distinguishability(const DteParams& params, double t_arrival) {
  if (!std::isfinite(t_arrival) || t_arrival < 0.0) {
    throw std::invalid_argument("t_arrival must be >= 0");
  }
  const double separation = 0.5 * params.v_rel() * params.tau();
  const double sigma_x0 = kHbar / (2.0 * params.sigma_p_rel());
  const double t_disp = params.t_rel();
  const double ratio_t = t_arrival / t_disp;
  const double sigma_x = sigma_x0 * std::sqrt(1.0 + ratio_t * ratio_t);
  return separation / sigma_x;
}

}  // namespace dtebell

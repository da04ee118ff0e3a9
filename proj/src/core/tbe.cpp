#include "core/tbe.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "core/constants.hpp"

namespace dtebell {

namespace {

void require_angle(double theta, const char* name) {
  if (!(theta >= 0.0 && theta <= 0.5 * kPi)) {
    throw std::invalid_argument(std::string(name) +
                                " must lie in [0, pi/2]");
  }
}

void require_finite_phase(double phi, const char* name) {
  if (!std::isfinite(phi)) {
    throw std::invalid_argument(std::string(name) + " must be finite");
  }
}

}  // namespace

PortOutcome::PortOutcome(int s1, int s2) : sigma1(s1), sigma2(s2) {
  if ((s1 != 1 && s1 != -1) || (s2 != 1 && s2 != -1)) {
    throw std::invalid_argument("port outcome labels must be +1 or -1");
  }
}

const std::array<PortOutcome, 4>& PortOutcome::all() {
  static const std::array<PortOutcome, 4> outcomes = {
      PortOutcome{+1, +1}, PortOutcome{+1, -1}, PortOutcome{-1, +1},
      PortOutcome{-1, -1}};
  return outcomes;
}

TbeSettings::TbeSettings(double phi1_in, double phi2_in, double theta1_in,
                         double theta2_in)
    : phi1(phi1_in), phi2(phi2_in), theta1(theta1_in), theta2(theta2_in) {
  require_finite_phase(phi1, "phi1");
  require_finite_phase(phi2, "phi2");
  require_angle(theta1, "theta1");
  require_angle(theta2, "theta2");
}

MeasurementAxis::MeasurementAxis(double nx_in, double ny_in, double nz_in)
    : nx(nx_in), ny(ny_in), nz(nz_in) {
  const double norm = std::sqrt(nx * nx + ny * ny + nz * nz);
  if (!(std::abs(norm - 1.0) <= 1e-12)) {
    throw std::invalid_argument("measurement axis must be a unit vector");
  }
}

MeasurementAxis MeasurementAxis::from_angles(double theta, double phi) {
  require_angle(theta, "theta");
  require_finite_phase(phi, "phi");
  const double s = std::sin(2.0 * theta);
  return MeasurementAxis(s * std::cos(phi), s * std::sin(phi),
                         std::cos(2.0 * theta));
}

double early_port_coefficient(double theta, int sigma) {
  return sigma > 0 ? std::cos(theta) : std::sin(theta);
}

double late_port_coefficient(double theta, int sigma) {
  return sigma > 0 ? std::sin(theta) : -std::cos(theta);
}

std::complex<double> tbe_amplitude(const PortOutcome& outcome,
                                   const TbeSettings& settings,
                                   double phi_tau) {
  require_finite_phase(phi_tau, "phi_tau");
  const double f = early_port_coefficient(settings.theta1, outcome.sigma1) *
                   early_port_coefficient(settings.theta2, outcome.sigma2);
  const double g = late_port_coefficient(settings.theta1, outcome.sigma1) *
                   late_port_coefficient(settings.theta2, outcome.sigma2);
  const std::complex<double> early =
      std::polar(f, settings.phi1 + settings.phi2);
  const std::complex<double> late = std::polar(g, phi_tau);
  return (early + late) / std::sqrt(2.0);
}

double tbe_probability(const PortOutcome& outcome, const TbeSettings& settings,
                       double phi_tau) {
  return std::norm(tbe_amplitude(outcome, settings, phi_tau));
}

double tbe_correlation(const TbeSettings& settings, double phi_tau) {
  double correlation = 0.0;
  for (const PortOutcome& outcome : PortOutcome::all()) {
    correlation +=
        outcome.parity() * tbe_probability(outcome, settings, phi_tau);
  }
  return correlation;
}

double spin_correlation(const MeasurementAxis& axis1,
                        const MeasurementAxis& axis2, double phi_tau) {
  require_finite_phase(phi_tau, "phi_tau");
  using cd = std::complex<double>;
  // n . sigma in the (E, L) basis.
  const auto pauli_dot = [](const MeasurementAxis& n) {
    return std::array<cd, 4>{cd(n.nz, 0.0), cd(n.nx, -n.ny), cd(n.nx, n.ny),
                             cd(-n.nz, 0.0)};
  };
  const std::array<cd, 4> a = pauli_dot(axis1);
  const std::array<cd, 4> b = pauli_dot(axis2);

  // State (|EE> + e^{i phi_tau} |LL>)/sqrt 2 in the basis EE, EL, LE, LL.
  const std::array<cd, 4> psi = {cd(1.0 / std::sqrt(2.0), 0.0), cd(0.0, 0.0),
                                 cd(0.0, 0.0),
                                 std::polar(1.0 / std::sqrt(2.0), phi_tau)};

  std::array<cd, 4> applied = {};
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      for (int k = 0; k < 2; ++k) {
        for (int l = 0; l < 2; ++l) {
          applied[2 * i + j] += a[2 * i + k] * b[2 * j + l] * psi[2 * k + l];
        }
      }
    }
  }
  cd expectation = 0.0;
  for (int i = 0; i < 4; ++i) {
    expectation += std::conj(psi[i]) * applied[i];
  }
  return expectation.real();
}

}  // namespace dtebell

#pragma once

#include <array>
#include <complex>

namespace dtebell {

// Which output port each particle was detected in (+1 or -1).
struct PortOutcome {
  int sigma1;
  int sigma2;

  PortOutcome(int s1, int s2);

  // Product sigma1*sigma2; the joint probabilities depend on the outcome
  // only through this.
  int parity() const { return sigma1 * sigma2; }

  static const std::array<PortOutcome, 4>& all();
};

// Per-interferometer phase shifts and beam-splitter angles. theta = pi/4 is
// a symmetric 50:50 splitter; theta in [0, pi/2].
struct TbeSettings {
  double phi1;
  double phi2;
  double theta1;
  double theta2;

  TbeSettings(double phi1, double phi2, double theta1, double theta2);
};

// Bloch-sphere measurement axis realized by an interferometer with
// splitting angle theta and phase phi:
//   n = (sin 2theta cos phi, sin 2theta sin phi, cos 2theta).
struct MeasurementAxis {
  double nx;
  double ny;
  double nz;

  // Throws unless |n| = 1 within 1e-12.
  MeasurementAxis(double nx, double ny, double nz);

  static MeasurementAxis from_angles(double theta, double phi);
};

// The early/late components map onto the output ports as
//   E -> e^{i phi} (cos theta |+> + sin theta |->)
//   L -> sin theta |+> - cos theta |->,
// so these are the port coefficients of the early (switch on) and late
// (switch off) branches.
double early_port_coefficient(double theta, int sigma);
double late_port_coefficient(double theta, int sigma);

// Joint two-particle amplitude for detecting the pair in the given port
// combination after both interferometers:
//   (1/sqrt 2) [ e^{i(phi1+phi2)} f1 f2 + e^{i phi_tau} g1 g2 ]
// with f_i/g_i the early/late port coefficients above.
std::complex<double> tbe_amplitude(const PortOutcome& outcome,
                                   const TbeSettings& settings,
                                   double phi_tau);

// |tbe_amplitude|^2. For theta = pi/4 this is
//   (1/4) [1 + sigma1 sigma2 cos(phi1 + phi2 - phi_tau)].
double tbe_probability(const PortOutcome& outcome, const TbeSettings& settings,
                       double phi_tau);

// Sum of sigma1*sigma2*P over the four port combinations. Equals
//   cos 2theta1 cos 2theta2
//     + sin 2theta1 sin 2theta2 cos(phi1 + phi2 - phi_tau).
double tbe_correlation(const TbeSettings& settings, double phi_tau);

// Two-qubit expectation <Psi| (n1.sigma) x (n2.sigma) |Psi> for the Bell
// state (|EE> + e^{i phi_tau} |LL>)/sqrt 2, evaluated as an explicit 4x4
// matrix element. Must agree with tbe_correlation when the axes are built
// from the same (theta, phi).
double spin_correlation(const MeasurementAxis& axis1,
                        const MeasurementAxis& axis2, double phi_tau);

}  // namespace dtebell

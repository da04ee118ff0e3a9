#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <vector>

#include "core/dte.hpp"
#include "core/oracle.hpp"
#include "core/params.hpp"

namespace dtebell {

struct ValidationScenario {
  DteParams params;
  DteSettings settings;
};

// One seeded random Gaussian scenario with dispersion ratios tau/T_cm and
// tau/T_rel in [0.05, 3] and arm offsets within +/-4 envelope widths of the
// matched point (capped at +/-2 tau v_rel so the momentum integrand stays
// resolvable). Deterministic for a given engine state.
ValidationScenario draw_validation_scenario(std::mt19937_64& rng);

struct ValidationRow {
  double mass;
  double v_rel;
  double sigma_p_cm;
  double sigma_p_rel;
  double tau;
  double phi_tau;
  double ell1;
  double ell2;
  std::array<double, 4> p_closed;
  std::array<double, 4> p_quadrature;
  std::array<double, 4> quadrature_error;
  double max_abs_deviation;
};

struct ValidationReport {
  std::uint64_t seed;
  int draws;
  double tolerance;
  double max_abs_deviation;
  bool pass;
  std::vector<ValidationRow> rows;
};

// Cross-checks the closed-form Gaussian probability against the momentum
// quadrature on `draws` seeded scenarios. pass = every per-outcome
// |closed - quadrature| below `tolerance`.
ValidationReport run_closed_form_validation(int draws, std::uint64_t seed,
                                            double tolerance,
                                            const QuadratureSpec& spec);

}  // namespace dtebell

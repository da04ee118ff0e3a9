#pragma once

namespace dtebell {

// Reduced Planck constant (2018 CODATA), J s. All public interfaces are SI.
inline constexpr double kHbar = 1.054571817e-34;

inline constexpr double kPi = 3.141592653589793238462643383279502884;

// Quantum maximum of the CHSH combination, 2*sqrt(2).
inline constexpr double kTsirelsonBound = 2.0 * 1.414213562373095048801688724209698079;

}  // namespace dtebell

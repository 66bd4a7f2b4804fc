#pragma once

#include "wer/linalg.hpp"

// All rates inside the library are angular frequencies in rad/us. Figure axes
// quoted as "B/2pi in MHz" are converted at the boundary with these helpers.
namespace wer::units {

/// f/2pi [MHz] -> angular frequency [rad/us].
constexpr double from_mhz(double f_mhz) { return two_pi * f_mhz; }

/// angular frequency [rad/us] -> f/2pi [MHz].
constexpr double to_mhz(double omega) { return omega / two_pi; }

constexpr double from_ns(double t_ns) { return t_ns * 1e-3; }

// Device values used by the reference runs.
inline constexpr double kappa = 5.0;                       // photon decay, rad/us
inline constexpr double lambda_r = two_pi * 41.0;          // on-resonance coupling
inline constexpr double mapping_t2 = 0.118;                // R -> Q transfer, us
inline constexpr double modulation_nu = two_pi * 660.0;    // sideband drive

}  // namespace wer::units

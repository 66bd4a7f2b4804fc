#pragma once

#include <vector>

#include "wer/tomography.hpp"
#include "wer/topology.hpp"

namespace wer {

/// 2 |c_e0| |c_g1| for a normalized state.
[[nodiscard]] double concurrence_pure(const SingleExcState& s);

/// Wootters concurrence. Throws Error(invalid_argument) for unphysical input.
[[nodiscard]] double concurrence_mixed(const TwoQubitDensity& rho);

struct ConcurrenceCurve {
  std::vector<double> phi;
  std::vector<double> value;
  double radius = 0.0;
  double center = 0.0;  ///< B_C
};

/// Concurrence of the right eigenvector of mode n (0 or 1) at every point of
/// one cycle. Points on the ring use the coalesced eigenvector.
[[nodiscard]] ConcurrenceCurve concurrence_vs_phi(const LoopSpec& spec, int mode, const EigenSource& source,
                                                  double kappa);

/// Concurrence at the loop point phi = pi (|lambda| = B_C - B_r, delta = 0).
[[nodiscard]] double e_pi(double radius, double center, double kappa);
[[nodiscard]] std::vector<double> e_pi_vs_radius(const std::vector<double>& radii, double center, double kappa);

/// min(1, 4 (B_C - B_r) / kappa).
[[nodiscard]] double e_pi_closed_form(double radius, double center, double kappa);

struct KinkEstimate {
  double location = 0.0;  ///< where the decreasing branch reaches 1
  double slope_below = 0.0;
  double slope_above = 0.0;
};

/// Linear fit of the points with E < 1 - tol, extrapolated to E = 1; slopes
/// are one-sided least-squares fits on either side of that crossing.
[[nodiscard]] KinkEstimate locate_kink(const std::vector<double>& radii, const std::vector<double>& e_values,
                                       double tol = 1e-9);

}  // namespace wer

#pragma once

#include <functional>
#include <span>
#include <vector>

namespace wer {

using Objective = std::function<double(std::span<const double>)>;

struct SimplexOptions {
  int max_evaluations = 5000;
  double size_tolerance = 1e-9;  ///< stop when the simplex characteristic size drops below this
  /// Also stop once the best value has not improved by more than
  /// value_tolerance for this many iterations (the objective hit its
  /// floating-point floor); 0 disables the test.
  int stall_iterations = 300;
  double value_tolerance = 1e-15;
  /// Fresh simplices rebuilt around the best point after convergence, until
  /// one fails to improve; guards against a collapsed simplex.
  int polish_restarts = 0;
};

struct SimplexResult {
  std::vector<double> x;
  double value = 0.0;
  int evaluations = 0;
  int iterations = 0;
  double size = 0.0;  ///< final simplex characteristic size
  bool converged = false;
  bool stalled = false;  ///< converged through the stall test
};

/// Derivative-free Nelder-Mead minimization (GSL nmsimplex2).
[[nodiscard]] SimplexResult nelder_mead(const Objective& f, std::vector<double> x0,
                                        std::vector<double> step, const SimplexOptions& opts = {});

/// Brent minimization on [lo, hi] around an interior point with f(mid) < f(lo), f(hi).
[[nodiscard]] double brent_minimize(const std::function<double(double)>& f, double lo, double mid,
                                    double hi, double tolerance = 1e-10, int max_iterations = 200);

/// Grid scan on [lo, hi] followed by Brent refinement of the best bracket.
[[nodiscard]] double scan_minimize(const std::function<double(double)>& f, double lo, double hi,
                                   int grid = 64, double tolerance = 1e-10);

}  // namespace wer

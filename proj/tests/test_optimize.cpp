#include <doctest.h>

#include <cmath>

#include "wer/optimize.hpp"

using namespace wer;

TEST_CASE("simplex finds the Rosenbrock minimum") {
  const Objective rosen = [](std::span<const double> x) {
    return 100.0 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1.0 - x[0], 2);
  };
  SimplexOptions o;
  o.max_evaluations = 20000;
  o.polish_restarts = 3;
  const SimplexResult r = nelder_mead(rosen, {-1.2, 1.0}, {0.5, 0.5}, o);
  CHECK(r.converged);
  CHECK(std::abs(r.x[0] - 1.0) < 1e-5);
  CHECK(std::abs(r.x[1] - 1.0) < 1e-5);
}

TEST_CASE("simplex reports non-convergence when the budget runs out") {
  const Objective bowl = [](std::span<const double> x) { return x[0] * x[0] + 3.0 * x[1] * x[1] + x[2] * x[2]; };
  SimplexOptions o;
  o.max_evaluations = 10;
  o.stall_iterations = 0;
  const SimplexResult r = nelder_mead(bowl, {3.0, -2.0, 1.0}, {1.0, 1.0, 1.0}, o);
  CHECK_FALSE(r.converged);
  CHECK(r.evaluations <= 12);
}

TEST_CASE("non-finite objective values are treated as worst") {
  const Objective f = [](std::span<const double> x) { return x[0] < 0.0 ? std::nan("") : (x[0] - 2.0) * (x[0] - 2.0); };
  const SimplexResult r = nelder_mead(f, {0.5}, {1.0});
  CHECK(std::abs(r.x[0] - 2.0) < 1e-6);
}

TEST_CASE("brent and scan minimizers") {
  auto f = [](double x) { return std::cos(x); };
  CHECK(std::abs(brent_minimize(f, 2.0, 3.0, 4.0, 1e-12) - 3.141592653589793) < 1e-7);
  CHECK(std::abs(scan_minimize(f, 0.0, 6.0, 13, 1e-12) - 3.141592653589793) < 1e-7);
  // Minimum on the boundary returns the boundary.
  CHECK(scan_minimize([](double x) { return x; }, 1.0, 2.0, 5, 1e-9) == 1.0);
  CHECK_THROWS((void)scan_minimize(f, 1.0, 1.0, 5, 1e-9));
}

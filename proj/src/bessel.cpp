#include <cmath>

#include "wer/dynamics.hpp"

namespace wer {

namespace {

// sum_k (-1)^k (x/2)^(2k+n) / (k! (k+n)!). Terms peak near k ~ x/2 with
// magnitude ~e^x / sqrt(x), so cancellation costs at most ~1e-13 for |x| <= 8.
double bessel_series(int n, double x) {
  const double half = 0.5 * x;
  const double q = -half * half;
  double term = 1.0;
  for (int k = 1; k <= n; ++k) term *= half / k;
  double sum = term;
  for (int k = 1; k < 200; ++k) {
    term *= q / (static_cast<double>(k) * (k + n));
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

}  // namespace

double bessel_j1(double x) {
  if (!std::isfinite(x)) fail(ErrorKind::invalid_argument, "bessel_j1: non-finite argument");
  if (std::abs(x) <= 8.0) return bessel_series(1, x);
  const double v = std::cyl_bessel_j(1.0, std::abs(x));
  return x < 0.0 ? -v : v;
}

double bessel_j0(double x) {
  if (!std::isfinite(x)) fail(ErrorKind::invalid_argument, "bessel_j0: non-finite argument");
  if (std::abs(x) <= 8.0) return bessel_series(0, x);
  return std::cyl_bessel_j(0.0, std::abs(x));
}

double inverse_bessel_j1(double target) {
  const double peak = bessel_j1(bessel_j1_first_max);
  if (!(target >= 0.0) || target > peak) {
    fail(ErrorKind::invalid_argument, "inverse_bessel_j1: target outside [0, max J1]");
  }
  double lo = 0.0;
  double hi = bessel_j1_first_max;
  for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (bessel_j1(mid) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace wer

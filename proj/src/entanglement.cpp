#include "wer/entanglement.hpp"

#include <algorithm>
#include <cmath>

namespace wer {

namespace {

struct Line {
  double slope = 0.0;
  double intercept = 0.0;
};

Line least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double den = n * sxx - sx * sx;
  require(den > 0.0, "least_squares: need two distinct abscissae");
  const double slope = (n * sxy - sx * sy) / den;
  return {slope, (sy - slope * sx) / n};
}

}  // namespace

double concurrence_pure(const SingleExcState& s) {
  const double n2 = s.norm2();
  require(n2 > 0.0, "concurrence_pure: zero state");
  return std::min(1.0, 2.0 * std::abs(s.c_e0()) * std::abs(s.c_g1()) / n2);
}

double concurrence_mixed(const TwoQubitDensity& rho) {
  rho.validate();
  const Mat4 herm = 0.5 * (rho.matrix + rho.matrix.adjoint());
  Mat4 yy = Mat4::Zero();
  yy(0, 3) = -1.0;
  yy(1, 2) = 1.0;
  yy(2, 1) = 1.0;
  yy(3, 0) = -1.0;
  const Mat4 tilde = yy * herm.conjugate() * yy;

  // R = rho tilde(rho) is similar to sqrt(rho) tilde(rho) sqrt(rho), which is
  // Hermitian PSD and so has a well-conditioned real spectrum.
  Eigen::SelfAdjointEigenSolver<Mat4> es(herm);
  const Eigen::Vector4d w = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const Mat4 root = es.eigenvectors() * w.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
  const Mat4 m = root * tilde * root;
  Eigen::SelfAdjointEigenSolver<Mat4> ms(0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
  Eigen::Vector4d mu = ms.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  std::sort(mu.data(), mu.data() + 4, std::greater<>());
  return std::clamp(mu(0) - mu(1) - mu(2) - mu(3), 0.0, 1.0);
}

ConcurrenceCurve concurrence_vs_phi(const LoopSpec& spec, int mode, const EigenSource& source, double kappa) {
  require(mode == 0 || mode == 1, "concurrence_vs_phi: mode must be 0 or 1");
  LoopSpec one = spec;
  one.cycles = 1;
  const auto pts = loop_points(one);
  ConcurrenceCurve curve;
  curve.radius = spec.radius;
  curve.center = std::hypot(spec.center_bx, spec.center_bz);
  for (int p = 0; p < one.steps; ++p) {
    const BVector& b = pts[static_cast<std::size_t>(p)];
    Vec2 u;
    try {
      u = source(b).right[mode];
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::ep_proximity) throw;
      u = coalesced_eigenvector(params_from_b(b, kappa));
    }
    curve.phi.push_back(two_pi * p / one.steps);
    curve.value.push_back(concurrence_pure(SingleExcState(u, false)));
  }
  return curve;
}

double e_pi(double radius, double center, double kappa) {
  require(radius >= 0.0 && radius < center, "e_pi: radius must lie in [0, B_C)");
  const SystemParams p{center - radius, 0.0, kappa};
  try {
    return concurrence_pure(eigensystem(p).right_state(0));
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::ep_proximity) throw;
    return concurrence_pure(SingleExcState(coalesced_eigenvector(p), true));
  }
}

std::vector<double> e_pi_vs_radius(const std::vector<double>& radii, double center, double kappa) {
  std::vector<double> out;
  out.reserve(radii.size());
  for (double r : radii) out.push_back(e_pi(r, center, kappa));
  return out;
}

double e_pi_closed_form(double radius, double center, double kappa) {
  require(kappa > 0.0, "e_pi_closed_form: kappa must be positive");
  return std::min(1.0, 4.0 * (center - radius) / kappa);
}

KinkEstimate locate_kink(const std::vector<double>& radii, const std::vector<double>& e_values, double tol) {
  require(radii.size() == e_values.size(), "locate_kink: size mismatch");
  std::vector<double> xf, yf, xs, ys;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (e_values[i] < 1.0 - tol) {
      xs.push_back(radii[i]);
      ys.push_back(e_values[i]);
    } else {
      xf.push_back(radii[i]);
      yf.push_back(e_values[i]);
    }
  }
  if (xs.size() < 2) fail(ErrorKind::no_transition, "fewer than two points below E = 1");
  const Line below_one = least_squares(xs, ys);
  KinkEstimate k;
  k.location = (1.0 - below_one.intercept) / below_one.slope;
  k.slope_above = below_one.slope;
  k.slope_below = xf.size() >= 2 ? least_squares(xf, yf).slope : 0.0;
  return k;
}

}  // namespace wer

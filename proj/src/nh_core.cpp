#include "wer/nh_core.hpp"

#include <cmath>
#include <sstream>

namespace wer {

namespace {

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

// Right eigenvector for energy E. Two algebraically equivalent forms exist,
// (conj(lambda), E - delta) from the first row of H - E and (E + i kappa/2,
// lambda) from the second; the larger one is used and rephased onto the
// first so the convention is continuous in parameter space.
Vec2 right_vector(const SystemParams& p, cplx e_minus_delta, cplx e_plus_half_kappa) {
  if (p.lambda == 0.0) {
    // Diagonal Hamiltonian: pick the exact basis vector.
    return std::abs(e_minus_delta) == 0.0 ? Vec2(1.0, 0.0) : Vec2(0.0, 1.0);
  }
  const Vec2 primary(std::conj(p.lambda), e_minus_delta);
  const Vec2 alternate(e_plus_half_kappa, p.lambda);
  const double n_primary = primary.norm();
  const double n_alternate = alternate.norm();
  if (n_primary >= n_alternate) return primary / n_primary;

  Vec2 v = alternate / n_alternate;
  const cplx ov = v.dot(primary);  // <alternate|primary>
  if (std::abs(ov) > 0.0) v *= ov / std::abs(ov);
  return v;
}

}  // namespace

void SystemParams::validate() const {
  if (!finite(lambda) || !std::isfinite(delta) || !std::isfinite(kappa)) {
    fail(ErrorKind::invalid_argument, "system parameters must be finite");
  }
  if (kappa < 0.0) fail(ErrorKind::invalid_argument, "kappa must be non-negative");
}

double BVector::norm() const { return std::sqrt(bx * bx + by * by + bz * bz); }

SystemParams params_from_b(const BVector& b, double kappa) {
  SystemParams p{cplx(b.bx, b.by), 2.0 * b.bz, kappa};
  p.validate();
  return p;
}

BVector b_from_params(const SystemParams& p) {
  p.validate();
  return {p.lambda.real(), p.lambda.imag(), 0.5 * p.delta};
}

SingleExcState::SingleExcState(const Vec2& amplitudes, bool normalized)
    : amp_(amplitudes), normalized_(normalized) {}

SingleExcState SingleExcState::normalized(cplx c_e0, cplx c_g1) {
  const Vec2 v(c_e0, c_g1);
  const double n = v.norm();
  if (!(n > 0.0) || !std::isfinite(n)) fail(ErrorKind::invalid_argument, "cannot normalize a zero state");
  return SingleExcState(v / n, true);
}

BiorthEigensystem BiorthEigensystem::from_right(const std::array<cplx, 2>& energy,
                                                const std::array<Vec2, 2>& right) {
  BiorthEigensystem es;
  es.energy = energy;
  Mat2 r;
  for (int n = 0; n < 2; ++n) {
    es.right[n] = right[n].normalized();
    r.col(n) = es.right[n];
  }
  const Mat2 inv = r.inverse();
  for (int n = 0; n < 2; ++n) es.left[n] = inv.row(n);
  return es;
}

BVector WerGeometry::ring_point(double azimuth) const {
  return {radius * std::cos(azimuth), radius * std::sin(azimuth), 0.0};
}

Mat2 hamiltonian_matrix(const SystemParams& p) {
  Mat2 h;
  h << p.delta, std::conj(p.lambda), p.lambda, cplx(0.0, -0.5 * p.kappa);
  return h;
}

cplx discriminant(const SystemParams& p) {
  const cplx w(2.0 * p.delta, p.kappa);
  return std::norm(p.lambda) + w * w / 16.0;
}

BiorthEigensystem eigensystem(const SystemParams& p) {
  p.validate();
  const cplx disc = discriminant(p);
  if (std::abs(disc) < ep_tolerance * p.kappa * p.kappa || disc == 0.0) {
    std::ostringstream os;
    os << "eigensystem requested within EP tolerance (|disc| = " << std::abs(disc)
       << ", lambda = " << p.lambda << ", delta = " << p.delta << ", kappa = " << p.kappa << ")";
    fail(ErrorKind::ep_proximity, os.str());
  }

  const cplx s = std::sqrt(disc);
  const cplx centre = cplx(2.0 * p.delta, -p.kappa) / 4.0;
  const cplx h = cplx(2.0 * p.delta, p.kappa) / 4.0;
  const double lam2 = std::norm(p.lambda);

  BiorthEigensystem es;
  Mat2 r;
  for (int n = 0; n < 2; ++n) {
    const double sign = n == 0 ? 1.0 : -1.0;
    es.energy[n] = centre + sign * s;
    // (E - delta)(E + i kappa/2) = |lambda|^2; recover the smaller factor from
    // the larger one to avoid cancellation.
    cplx e_minus_delta = -h + sign * s;
    cplx e_plus_half_kappa = h + sign * s;
    if (std::abs(e_minus_delta) < std::abs(e_plus_half_kappa)) {
      e_minus_delta = lam2 / e_plus_half_kappa;
    } else {
      e_plus_half_kappa = lam2 / e_minus_delta;
    }
    es.right[n] = right_vector(p, e_minus_delta, e_plus_half_kappa);
    r.col(n) = es.right[n];
  }

  const Mat2 inv = r.inverse();
  es.left[0] = inv.row(0);
  es.left[1] = inv.row(1);
  return es;
}

Vec2 coalesced_eigenvector(const SystemParams& p) {
  p.validate();
  const cplx e_minus_delta = -cplx(2.0 * p.delta, p.kappa) / 4.0;
  if (p.lambda == 0.0 && e_minus_delta == 0.0) return Vec2(1.0, 0.0);
  return Vec2(std::conj(p.lambda), e_minus_delta).normalized();
}

WerGeometry wer_geometry(double kappa) {
  if (!(kappa > 0.0) || !std::isfinite(kappa)) fail(ErrorKind::invalid_argument, "kappa must be positive");
  return {kappa, kappa / 4.0};
}

double locate_ep_on_ray(double kappa, double azimuth, double tolerance) {
  const WerGeometry g = wer_geometry(kappa);
  const cplx dir = std::polar(1.0, azimuth);
  auto f = [&](double r) { return discriminant({r * dir, 0.0, g.kappa}).real(); };
  double lo = 0.0;
  double hi = g.kappa;
  // f(0) = -kappa^2/16 < 0 and f(kappa) = 15 kappa^2/16 > 0.
  while (hi - lo > tolerance * g.kappa) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (f(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace wer

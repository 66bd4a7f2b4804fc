#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "wer/nh_core.hpp"

using namespace wer;

namespace {

SystemParams random_params(std::mt19937_64& rng, double kappa = 5.0) {
  const double mag = oracle::uniform(rng, 0.0, 2.0 * kappa);
  const double phase = oracle::uniform(rng, -pi, pi);
  return {std::polar(mag, phase), oracle::uniform(rng, -2.0 * kappa, 2.0 * kappa), kappa};
}

// Energies from the brute-force solver, ordered to match `es`.
void check_against_brute(const SystemParams& p, double tol) {
  const BiorthEigensystem es = eigensystem(p);
  const auto ref = oracle::brute_eigen(oracle::hamiltonian(p.lambda, p.delta, p.kappa));
  const bool swap = std::abs(es.energy[0] - ref.value[1]) < std::abs(es.energy[0] - ref.value[0]);
  for (int n = 0; n < 2; ++n) {
    const int m = swap ? 1 - n : n;
    const double scale = std::max(1.0, std::abs(ref.value[m]));
    CHECK(std::abs(es.energy[n] - ref.value[m]) / scale < tol);
    CHECK(oracle::overlap2(es.right[n], ref.vector[m]) > 1.0 - 1e-10);
  }
}

}  // namespace

TEST_CASE("params_from_b and b_from_params") {
  const SystemParams a = params_from_b({1.0, 0.0, 0.0}, 5.0);
  CHECK(a.lambda == cplx(1.0, 0.0));
  CHECK(a.delta == 0.0);
  const SystemParams b = params_from_b({0.0, 0.0, 0.5}, 5.0);
  CHECK(b.lambda == cplx(0.0, 0.0));
  CHECK(b.delta == 1.0);

  std::mt19937_64 rng(11);
  for (int k = 0; k < 100; ++k) {
    const BVector v{oracle::uniform(rng, -5, 5), oracle::uniform(rng, -5, 5), oracle::uniform(rng, -5, 5)};
    CHECK(b_from_params(params_from_b(v, 5.0)) == v);
  }
  CHECK_THROWS_AS((void)params_from_b({std::nan(""), 0.0, 0.0}, 5.0), Error);
  CHECK_THROWS_AS((void)params_from_b({1.0, 0.0, 0.0}, -1.0), Error);
}

TEST_CASE("hamiltonian matrix entries") {
  CHECK(hamiltonian_matrix({0.0, 0.0, 0.0}).norm() == 0.0);
  const Mat2 h = hamiltonian_matrix({2.0, 1.0, 4.0});
  CHECK(h(0, 0) == cplx(1.0, 0.0));
  CHECK(h(0, 1) == cplx(2.0, 0.0));
  CHECK(h(1, 0) == cplx(2.0, 0.0));
  CHECK(h(1, 1) == cplx(0.0, -2.0));
  const Mat2 herm = hamiltonian_matrix({cplx(0.7, -0.3), 0.4, 0.0});
  CHECK((herm - herm.adjoint()).norm() == 0.0);
  const Mat2 nh = hamiltonian_matrix({cplx(0.7, -0.3), 0.4, 1.0});
  CHECK((nh - nh.adjoint()).norm() > 0.5);
}

TEST_CASE("eigensystem of simple points") {
  SUBCASE("diagonal") {
    const BiorthEigensystem es = eigensystem({0.0, 1.0, 2.0});
    CHECK(std::abs(es.energy[0] - cplx(1.0, 0.0)) < 1e-14);
    CHECK(std::abs(es.energy[1] - cplx(0.0, -1.0)) < 1e-14);
    CHECK(std::abs(std::abs(es.right[0](0)) - 1.0) < 1e-14);
    CHECK(std::abs(std::abs(es.right[1](1)) - 1.0) < 1e-14);
  }
  SUBCASE("resonant Hermitian") {
    const BiorthEigensystem es = eigensystem({1.0, 0.0, 0.0});
    CHECK(std::abs(es.energy[0] - 1.0) < 1e-14);
    CHECK(std::abs(es.energy[1] + 1.0) < 1e-14);
    const Vec2 plus = Vec2(1.0, 1.0) / std::sqrt(2.0);
    const Vec2 minus = Vec2(1.0, -1.0) / std::sqrt(2.0);
    CHECK(oracle::overlap2(es.right[0], plus) > 1.0 - 1e-14);
    CHECK(oracle::overlap2(es.right[1], minus) > 1.0 - 1e-14);
  }
  SUBCASE("lambda 1, delta 0.3, kappa 5") { check_against_brute({1.0, 0.3, 5.0}, 1e-12); }
}

TEST_CASE("eigensystem matches brute force on random points") {
  std::mt19937_64 rng(2024);
  for (int k = 0; k < 2000; ++k) {
    const SystemParams p = random_params(rng);
    if (std::abs(discriminant(p)) < 1e-6) continue;
    check_against_brute(p, 1e-12);
  }
}

TEST_CASE("eigenvector residual, biorthonormality and trace identity") {
  std::mt19937_64 rng(7);
  for (int k = 0; k < 1000; ++k) {
    const SystemParams p = random_params(rng);
    if (std::abs(std::sqrt(discriminant(p))) < 1e-3 * p.kappa) continue;
    const BiorthEigensystem es = eigensystem(p);
    const auto h = oracle::hamiltonian(p.lambda, p.delta, p.kappa);
    for (int n = 0; n < 2; ++n) {
      CHECK((h * es.right[n] - es.energy[n] * es.right[n]).norm() <= 1e-10 * h.norm());
      CHECK(std::abs(es.right[n].norm() - 1.0) < 1e-12);
      for (int m = 0; m < 2; ++m) CHECK(std::abs((es.left[n] * es.right[m])(0) - (n == m ? 1.0 : 0.0)) < 1e-9);
    }
    const cplx trace = cplx(p.delta, -p.kappa / 2.0);
    CHECK(std::abs(es.energy[0] + es.energy[1] - trace) <= 1e-12 * std::max(1.0, std::abs(trace)));
  }
}

TEST_CASE("Hermitian limit has real energies and orthogonal vectors") {
  std::mt19937_64 rng(5);
  for (int k = 0; k < 200; ++k) {
    SystemParams p = random_params(rng, 0.0);
    p.lambda = std::polar(oracle::uniform(rng, 0.1, 5.0), oracle::uniform(rng, -pi, pi));
    const BiorthEigensystem es = eigensystem(p);
    CHECK(std::abs(es.energy[0].imag()) < 1e-12);
    CHECK(std::abs(es.energy[1].imag()) < 1e-12);
    CHECK(std::abs(es.right[0].dot(es.right[1])) < 1e-12);
  }
}

TEST_CASE("phase covariance under lambda -> lambda e^{i chi}") {
  std::mt19937_64 rng(9);
  for (int k = 0; k < 200; ++k) {
    const SystemParams p = random_params(rng);
    if (std::abs(discriminant(p)) < 1e-6) continue;
    const double chi = oracle::uniform(rng, -pi, pi);
    SystemParams q = p;
    q.lambda *= std::polar(1.0, chi);
    const BiorthEigensystem a = eigensystem(p);
    const BiorthEigensystem b = eigensystem(q);
    for (int n = 0; n < 2; ++n) {
      CHECK(std::abs(a.energy[n] - b.energy[n]) < 1e-12 * std::max(1.0, std::abs(a.energy[n])));
      // Relative phase of the |e,0> amplitude against the |g,1> amplitude shifts by -chi.
      const cplx ra = a.right[n](0) / a.right[n](1);
      const cplx rb = b.right[n](0) / b.right[n](1);
      CHECK(std::abs(rb - ra * std::polar(1.0, -chi)) < 1e-9 * std::max(1.0, std::abs(ra)));
    }
  }
}

TEST_CASE("discriminant values and identity with the energy splitting") {
  const double kappa = 5.0;
  CHECK(std::abs(discriminant({kappa / 4.0, 0.0, kappa})) < 1e-15);
  CHECK(std::abs(discriminant({0.0, 0.0, 4.0}) - cplx(-1.0, 0.0)) < 1e-15);
  CHECK(std::abs(discriminant({kappa / 2.0, 0.0, kappa}) - 3.0 * kappa * kappa / 16.0) < 1e-14);

  std::mt19937_64 rng(3);
  for (int k = 0; k < 500; ++k) {
    const SystemParams p = random_params(rng);
    const auto ref = oracle::brute_eigen(oracle::hamiltonian(p.lambda, p.delta, p.kappa));
    const cplx split = (ref.value[0] - ref.value[1]) * (ref.value[0] - ref.value[1]) / 4.0;
    CHECK(std::abs(discriminant(p) - split) < 1e-10 * std::max(1.0, std::abs(split)));
  }
}

TEST_CASE("exceptional ring geometry") {
  const WerGeometry g = wer_geometry(5.0);
  CHECK(g.radius == 1.25);
  for (int k = 0; k < 16; ++k) {
    const BVector b = g.ring_point(two_pi * k / 16);
    CHECK(b.bz == 0.0);
    CHECK(std::abs(discriminant(params_from_b(b, 5.0))) < 1e-14);
  }
  CHECK_THROWS_AS((void)wer_geometry(0.0), Error);
  CHECK_THROWS_AS((void)wer_geometry(-1.0), Error);
}

TEST_CASE("eigensystem refuses points on the ring") {
  try {
    (void)eigensystem({1.25, 0.0, 5.0});
    FAIL("expected ep-proximity");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ep_proximity);
  }
  CHECK_NOTHROW((void)eigensystem({1.25 + 1e-3, 0.0, 5.0}));
}

TEST_CASE("EP root on rays") {
  for (double az : {0.0, 0.7, 2.0, -1.3}) CHECK(std::abs(locate_ep_on_ray(5.0, az) - 1.25) < 1e-10);
  CHECK(std::abs(locate_ep_on_ray(2.0, 0.0) - 0.5) < 1e-10);
}

TEST_CASE("coalescence along a radial approach") {
  double prev_overlap = 0.0;
  double prev_gap = 1e9;
  for (double d : {0.5, 0.2, 0.1, 0.05, 0.02, 0.01, 0.005, 0.001}) {
    const BiorthEigensystem es = eigensystem({1.25 + d, 0.0, 5.0});
    const double ov = std::abs(es.right[0].dot(es.right[1]));
    const double gap = std::abs(es.energy[0] - es.energy[1]);
    CHECK(ov > prev_overlap);
    CHECK(gap < prev_gap);
    prev_overlap = ov;
    prev_gap = gap;
  }
  CHECK(prev_overlap > 0.95);
  const Vec2 u = coalesced_eigenvector({1.25, 0.0, 5.0});
  const auto h = oracle::hamiltonian(1.25, 0.0, 5.0);
  const cplx e = cplx(0.0, -5.0 / 4.0);
  CHECK((h * u - e * u).norm() < 1e-12);
}

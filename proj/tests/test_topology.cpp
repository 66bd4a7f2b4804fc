#include <doctest.h>

#include <algorithm>

#include "oracles.hpp"
#include "wer/topology.hpp"

using namespace wer;

namespace {

constexpr double kappa = 5.0;

std::array<double, 2> sorted(std::array<double, 2> v) {
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

TEST_CASE("loop points") {
  const LoopSpec spec = centred_loop(kappa, 1.0, 16, 1);
  const auto pts = loop_points(spec);
  REQUIRE(pts.size() == 17);
  CHECK(pts[0].bx == doctest::Approx(3.5));
  CHECK(pts[4].bz == doctest::Approx(1.0));
  CHECK(pts[8].bx == doctest::Approx(1.5));
  CHECK(pts[16] == pts[0]);
  for (const auto& b : pts) CHECK(b.by == 0.0);

  const auto two = loop_points(centred_loop(kappa, 1.0, 16, 2));
  REQUIRE(two.size() == 33);
  for (int p = 0; p <= 16; ++p) CHECK(two[16 + p] == two[p]);

  LoopSpec bad = spec;
  bad.steps = 8;
  CHECK_THROWS_AS(bad.validate(), Error);
  bad = spec;
  bad.radius = -1.0;
  CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("encircling the ring") {
  CHECK(encircles_ring(centred_loop(kappa, 1.5), kappa));
  CHECK_FALSE(encircles_ring(centred_loop(kappa, 1.0), kappa));
  LoopSpec off = centred_loop(kappa, 0.5);
  off.center_bx = 1.25;
  CHECK(encircles_ring(off, kappa));
}

TEST_CASE("mode tracking swaps only around the ring") {
  const auto inside = loop_points(centred_loop(kappa, 0.36 * kappa, 256, 2));
  CHECK(track_modes(inside, kappa, 256).swapped_after_cycle);
  const auto outside = loop_points(centred_loop(kappa, 0.2 * kappa, 256, 1));
  CHECK_FALSE(track_modes(outside, kappa, 256).swapped_after_cycle);
  // Vectors rotated far from both previous modes leave no continued mode.
  const EigenSource rotated = [](const BVector& b) {
    if (b.bz > 0.0) return BiorthEigensystem::from_right({1.0, -1.0}, {Vec2(1.0, 0.0), Vec2(0.0, 1.0)});
    return BiorthEigensystem::from_right({1.0, -1.0}, {Vec2(std::cos(1.0), std::sin(1.0)), Vec2(std::cos(1.2), std::sin(1.2))});
  };
  const std::vector<BVector> jump{{0.0, 0.0, 1.0}, {1.0, 0.0, 0.0}, {0.0, 0.0, 1.0}};
  CHECK_THROWS_AS((void)track_modes(jump, rotated, 2), Error);
}

TEST_CASE("gauge fixing") {
  const auto pts = loop_points(centred_loop(kappa, 0.3 * kappa, 64, 2));
  const ModeTrack fixed = gauge_fix(track_modes(pts, kappa, 64));
  for (std::size_t p = 0; p + 1 < fixed.systems.size(); ++p) {
    for (int n = 0; n < 2; ++n) {
      const cplx link = (fixed.systems[p + 1].left[n] * fixed.systems[p].right[n])(0);
      CHECK(std::abs(link.imag()) < 1e-12 * std::abs(link));
      CHECK(link.real() > 0.0);
      CHECK(std::abs((fixed.systems[p].left[n] * fixed.systems[p].right[n])(0) - 1.0) < 1e-12);
    }
  }
  const ModeTrack twice = gauge_fix(fixed);
  for (std::size_t p = 0; p < fixed.systems.size(); ++p)
    for (int n = 0; n < 2; ++n) CHECK((twice.systems[p].right[n] - fixed.systems[p].right[n]).norm() < 1e-12);
}

TEST_CASE("Berry phase is gauge invariant") {
  const auto pts = loop_points(centred_loop(kappa, 0.2 * kappa, 64, 1));
  ModeTrack track = track_modes(pts, kappa, 64);
  const BerryResult ref = berry_phase(gauge_fix(track));
  std::mt19937_64 rng(5);
  for (auto& s : track.systems) {
    for (int n = 0; n < 2; ++n) {
      const cplx g = std::polar(1.0, oracle::uniform(rng, -pi, pi));
      s.right[n] *= g;
      s.left[n] /= g;
    }
  }
  const BerryResult again = berry_phase(gauge_fix(track));
  for (int n = 0; n < 2; ++n) CHECK(std::abs(again.beta[n] - ref.beta[n]) < 1e-12);
}

TEST_CASE("Berry phases against a brute-force loop product") {
  for (double r_over_kappa : {0.1, 0.15, 0.2, 0.24, 0.26, 0.3, 0.36, 0.45}) {
    const LoopSpec spec = centred_loop(kappa, r_over_kappa * kappa, 256);
    const BerryResult b = berry_phase(spec, analytic_source(kappa));
    const oracle::LoopBerry o = oracle::loop_berry(spec.center_bx, 0.0, spec.radius, kappa, 256);
    CHECK(b.swapped == o.swapped);
    CHECK(b.cycles == (o.swapped ? 2 : 1));
    const auto got = sorted(b.beta);
    const auto want = sorted({o.beta[0], o.beta[1]});
    for (int n = 0; n < 2; ++n) CHECK(std::abs(got[n] - want[n]) < 1e-9);
  }
}

TEST_CASE("Berry phase values inside and outside the ring") {
  for (double r_over_kappa : {0.1, 0.2}) {
    const BerryResult b = berry_phase(centred_loop(kappa, r_over_kappa * kappa, 512), analytic_source(kappa));
    CHECK_FALSE(b.swapped);
    for (int n = 0; n < 2; ++n) CHECK(std::abs(b.beta[n]) < 0.02 * pi);
  }
  for (double r_over_kappa : {0.3, 0.4}) {
    const BerryResult b = berry_phase(centred_loop(kappa, r_over_kappa * kappa, 512), analytic_source(kappa));
    CHECK(b.swapped);
    CHECK(b.cycles == 2);
    for (int n = 0; n < 2; ++n) CHECK(std::abs(b.beta[n] + pi) < 0.02 * pi);
  }
}

TEST_CASE("Hermitian loops give the spin-1/2 solid-angle phase") {
  LoopSpec around = centred_loop(0.0, 1.0, 256);
  around.center_bx = 0.0;
  const BerryResult b = berry_phase(around, analytic_source(0.0));
  for (int n = 0; n < 2; ++n) CHECK(std::abs(b.beta[n] + pi) < 1e-6);
  LoopSpec aside = around;
  aside.center_bx = 2.0;
  const BerryResult z = berry_phase(aside, analytic_source(0.0));
  for (int n = 0; n < 2; ++n) CHECK(std::abs(z.beta[n]) < 1e-9);
}

TEST_CASE("Berry phase discretization converges") {
  for (double r_over_kappa : {0.15, 0.35}) {
    const BerryResult coarse = berry_phase(centred_loop(kappa, r_over_kappa * kappa, 256), analytic_source(kappa));
    const BerryResult fine = berry_phase(centred_loop(kappa, r_over_kappa * kappa, 512), analytic_source(kappa));
    const auto a = sorted(coarse.beta);
    const auto b = sorted(fine.beta);
    for (int n = 0; n < 2; ++n) CHECK(std::abs(a[n] - b[n]) < 1e-3);
    const BerryResult lin = berry_phase(centred_loop(kappa, r_over_kappa * kappa, 2048), analytic_source(kappa),
                                        BerrySum::linear);
    const auto c = sorted(lin.beta);
    for (int n = 0; n < 2; ++n) CHECK(std::abs(c[n] - b[n]) < 1e-2);
  }
}

TEST_CASE("small loops far from the ring have vanishing phase") {
  LoopSpec spec = centred_loop(kappa, 0.01, 64);
  spec.center_bx = 4.0;
  const BerryResult b = berry_phase(spec, analytic_source(kappa));
  for (int n = 0; n < 2; ++n) CHECK(std::abs(b.beta[n]) < 1e-4);
}

TEST_CASE("branch wrapping") {
  CHECK(wrap_berry(0.0) == 0.0);
  CHECK(wrap_berry(pi / 2.0) == doctest::Approx(pi / 2.0));
  CHECK(wrap_berry(pi) == doctest::Approx(-pi));
  CHECK(wrap_berry(-3.0 * pi / 2.0) == doctest::Approx(pi / 2.0));
  CHECK(wrap_berry(-1e-13) == doctest::Approx(-1e-13));
  CHECK(wrap_berry(5.0 * two_pi - 0.3) == doctest::Approx(-0.3));
}

TEST_CASE("sphere eigensystem") {
  CHECK(sphere_point(2.0, 0.0, 0.0).bz == doctest::Approx(2.0));
  CHECK(sphere_point(2.0, pi / 2.0, pi / 2.0).by == doctest::Approx(2.0));
  for (double r : {0.8, 1.5}) {
    const BiorthEigensystem north = sphere_eigensystem(r, kappa, 1e-3, 0.0);
    CHECK(std::norm(north.right[0](0)) > 0.99);
    for (double theta : {0.3, 1.2, 2.0, 3.0}) {
      for (double phi : {0.0, 1.0, -2.5}) {
        const BVector b = sphere_point(r, theta, phi);
        const auto h = oracle::hamiltonian(cplx(b.bx, b.by), 2.0 * b.bz, kappa);
        const BiorthEigensystem es = sphere_eigensystem(r, kappa, theta, phi);
        const auto pop = model_populations(r, kappa, theta);
        for (int n = 0; n < 2; ++n) {
          CHECK((h * es.right[n] - es.energy[n] * es.right[n]).norm() < 1e-10);
          CHECK(std::norm(es.right[n](0)) == doctest::Approx(pop[n]).epsilon(1e-10));
          const Vec2 g = sphere_gauge_vector(r, kappa, theta, phi, n);
          CHECK(std::abs(g(1).imag()) < 1e-14);
          CHECK(g(1).real() >= 0.0);
        }
      }
    }
  }
}

TEST_CASE("model populations at the poles") {
  for (double r : {0.8, 1.5}) {
    const auto north = model_populations(r, kappa, 0.0);
    CHECK(north[0] == doctest::Approx(1.0));
    CHECK(north[1] == doctest::Approx(0.0));
  }
  const auto big = model_populations(1.5, kappa, pi);
  CHECK(big[0] == doctest::Approx(0.0));
  CHECK(big[1] == doctest::Approx(1.0));
  const auto small = model_populations(0.8, kappa, pi);
  CHECK(small[0] == doctest::Approx(1.0));
}

TEST_CASE("Chern numbers from the meridian populations") {
  SphereSpec spec;
  spec.n_theta = 24;
  for (double r_over_kappa : {0.15, 0.2, 0.24}) {
    spec.radius = r_over_kappa * kappa;
    const ChernResult c = chern_meridian(spec, kappa, analytic_source(kappa));
    CHECK(c.quantized == std::array<int, 2>{0, 0});
    CHECK(std::abs(c.fitted_radius - spec.radius) < 1e-6);
    CHECK(c.rms < 1e-8);
  }
  for (double r_over_kappa : {0.26, 0.3, 0.4}) {
    spec.radius = r_over_kappa * kappa;
    const ChernResult c = chern_meridian(spec, kappa, analytic_source(kappa));
    CHECK(c.quantized == std::array<int, 2>{-1, 1});
    CHECK(std::abs(c.chern[0] + 1.0) < 1e-6);
    CHECK(std::abs(c.fitted_radius - spec.radius) < 1e-6);
  }
}

TEST_CASE("weighted meridian fit ignores zero-weight modes") {
  SphereSpec spec;
  spec.n_theta = 24;
  spec.radius = 0.3 * kappa;
  // Corrupt the second mode and give it no weight.
  const EigenSource base = analytic_source(kappa);
  const EigenSource noisy = [&](const BVector& b) {
    BiorthEigensystem es = base(b);
    es.right[1] = Vec2(0.6, 0.8);
    return BiorthEigensystem::from_right(es.energy, es.right);
  };
  const WeightSource only_first = [](const BVector&) { return std::array<double, 2>{1.0, 0.0}; };
  CHECK_THROWS_AS((void)chern_meridian(spec, kappa, noisy), Error);
  const ChernResult c = chern_meridian(spec, kappa, noisy, only_first);
  CHECK(c.quantized == std::array<int, 2>{-1, 1});
}

TEST_CASE("Chern numbers from the plaquette integral") {
  SphereSpec spec;
  spec.n_theta = 48;
  spec.n_phi = 48;
  for (double r_over_kappa : {0.15, 0.22}) {
    spec.radius = r_over_kappa * kappa;
    const ChernResult c = chern_integral(spec, kappa);
    CHECK(c.quantized == std::array<int, 2>{0, 0});
  }
  for (double r_over_kappa : {0.28, 0.4}) {
    spec.radius = r_over_kappa * kappa;
    const ChernResult c = chern_integral(spec, kappa);
    CHECK(c.quantized == std::array<int, 2>{-1, 1});
    CHECK(std::abs(c.chern[1] - 1.0) < 1e-6);
  }
  // Without loss the sphere always encloses the degeneracy at the origin.
  spec.radius = 0.5;
  CHECK(chern_integral(spec, 0.0).quantized == std::array<int, 2>{-1, 1});
}

TEST_CASE("Berry connection on the sphere") {
  for (double r : {0.8, 1.5}) {
    for (double theta : {0.5, 1.4, 2.6}) {
      const Connection a = berry_connection_sphere(r, kappa, theta, 0.7, 1e-4);
      const Connection b = berry_connection_sphere(r, kappa, theta, 0.7, 5e-5);
      for (int n = 0; n < 2; ++n) {
        CHECK(std::abs(a.a_theta[n] - b.a_theta[n]) < 1e-6);
        CHECK(std::abs(a.a_phi[n] - b.a_phi[n]) < 1e-6);
      }
    }
  }
  try {
    (void)berry_connection_sphere(1.5, kappa, 1e-4, 0.0);
    FAIL("expected pole proximity");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::pole_proximity);
  }
}

TEST_CASE("transition detection") {
  const Transition t = detect_transition({1.0, 2.0, 3.0, 4.0}, {0.0, 0.0, -1.0, -1.0});
  CHECK(t.critical == 2.5);
  CHECK(t.width == 1.0);
  CHECK(t.index == 1);
  try {
    (void)detect_transition({1.0, 2.0, 3.0}, {0.0, 0.2, 0.1});
    FAIL("expected no transition");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::no_transition);
  }
  CHECK_THROWS_AS((void)detect_transition({1.0, 2.0}, {0.0}), Error);
}

#include <doctest.h>

#include <algorithm>

#include "oracles.hpp"
#include "wer/dynamics.hpp"
#include "wer/units.hpp"

using namespace wer;

TEST_CASE("J1 against the integral representation") {
  for (int k = 0; k <= 100; ++k) {
    const double x = 0.1 * k;
    CHECK(std::abs(bessel_j1(x) - oracle::bessel_j1_quadrature(x)) < 1e-12);
  }
  CHECK(bessel_j1(-0.7) == doctest::Approx(-bessel_j1(0.7)).epsilon(1e-15));
  CHECK(std::abs(bessel_j1(bessel_j1_first_max) - 0.58186522428159659) < 1e-14);
  CHECK(std::abs(bessel_j0(0.0) - 1.0) < 1e-15);
  CHECK(std::abs(bessel_j1(12.0) - oracle::bessel_j1_quadrature(12.0)) < 1e-12);
  CHECK_THROWS_AS((void)bessel_j1(std::nan("")), Error);
}

TEST_CASE("inverse J1 on the rising branch") {
  for (double target : {0.0, 0.05, 0.1, 0.15, 0.3, 0.5, 0.58}) {
    const double mu = inverse_bessel_j1(target);
    CHECK(mu >= 0.0);
    CHECK(mu <= bessel_j1_first_max);
    CHECK(std::abs(bessel_j1(mu) - target) < 1e-13);
  }
  CHECK_THROWS_AS((void)inverse_bessel_j1(0.6), Error);
  CHECK_THROWS_AS((void)inverse_bessel_j1(-0.1), Error);
}

TEST_CASE("effective coupling") {
  DriveParams d{units::lambda_r, two_pi * 6656.0, two_pi * 5996.0, 0.0, units::modulation_nu};
  CHECK(std::abs(effective_coupling(d)) == 0.0);
  d.epsilon = 0.2 * d.nu;
  CHECK(std::abs(effective_coupling(d) - d.lambda_r * oracle::bessel_j1_quadrature(0.2)) < 1e-9);
  CHECK(effective_coupling_detuned(d, 0.0) == effective_coupling(d));

  // First order in the detuning: d/d delta of J1(eps/(nu+delta)) = -J1'(mu) mu / nu.
  const double mu = d.modulation_index();
  const double slope = -d.lambda_r * (bessel_j0(mu) - bessel_j1(mu) / mu) * mu / d.nu;
  for (double h : {1e-2, 1e-1, 1.0}) {
    const double fd = (effective_coupling_detuned(d, h).real() - effective_coupling(d).real()) / h;
    CHECK(std::abs(fd - slope) < 1e-3 * std::abs(slope));
  }
  // A percent-level detuning moves the coupling by about a percent at small mu.
  CHECK(std::abs(effective_coupling_detuned(d, 0.01 * d.nu).real() / effective_coupling(d).real() - 1.0) < 0.011);

  CHECK_THROWS_AS((void)effective_coupling_detuned(d, -2.0 * d.nu), Error);
  DriveParams bad = d;
  bad.nu = 0.0;
  CHECK_THROWS_AS((void)effective_coupling(bad), Error);
}

TEST_CASE("unmodulated drive stays off resonance") {
  const double nu = units::modulation_nu;
  const double lam = units::lambda_r;
  const DriveParams d{lam, two_pi * 6656.0, two_pi * 6656.0 - nu, 0.0, nu};
  CHECK(d.detuning() == doctest::Approx(0.0));
  const DrivenRun r = simulate_driven(d, {}, SingleExcState::excited(), 0.02, two_pi / nu / 64);
  const double dip = 1.0 - *std::min_element(r.excited_population.begin(), r.excited_population.end());
  const double expect = 4.0 * lam * lam / (4.0 * lam * lam + nu * nu);
  CHECK(dip == doctest::Approx(expect).epsilon(0.05));
}

TEST_CASE("driven simulation guards") {
  const double nu = units::modulation_nu;
  const DriveParams d{units::lambda_r, two_pi * 6656.0, two_pi * 6656.0 - nu, 0.1 * nu, nu};
  CHECK_THROWS_AS((void)simulate_driven(d, {}, SingleExcState::excited(), 0.01, two_pi / nu / 4), Error);
  try {
    (void)simulate_driven(d, FockTruncation{1}, SingleExcState::excited(), 0.01, two_pi / nu / 64);
    FAIL("expected truncation error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::truncation);
  }
  const DrivenRun r = simulate_driven(d, {}, SingleExcState::excited(), 0.01, two_pi / nu / 64);
  CHECK(r.top_level_population < 1e-12);
}

TEST_CASE("fit_rabi recovers a clean oscillation") {
  std::vector<double> t;
  std::vector<double> pe;
  for (int k = 0; k < 400; ++k) {
    t.push_back(0.001 * k);
    const double s = std::sin(0.5 * 37.0 * t.back());
    pe.push_back(1.0 - 0.96 * s * s);
  }
  const RabiFit f = fit_rabi(t, pe, 35.0);
  CHECK(f.omega == doctest::Approx(37.0).epsilon(1e-6));
  CHECK(f.amplitude == doctest::Approx(0.96).epsilon(1e-6));
  CHECK(f.rms < 1e-8);
  CHECK_THROWS_AS((void)fit_rabi({0.0, 1.0}, {1.0, 0.5}, 1.0), Error);
}

TEST_CASE("sideband Rabi frequency follows lambda_r J1(mu)") {
  const DriveValidation v = validate_drive(units::lambda_r, units::modulation_nu, inverse_bessel_j1(0.1));
  CHECK(std::abs(v.ratio() - 1.0) < 0.02);
  CHECK(v.min_population < 0.05);
  CHECK(v.predicted_coupling == doctest::Approx(0.1 * units::lambda_r).epsilon(1e-12));
}

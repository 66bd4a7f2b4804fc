#include <algorithm>
#include <cmath>
#include <vector>

#include "wer/dynamics.hpp"
#include "wer/optimize.hpp"

namespace wer {

namespace {

using Ladder = Eigen::VectorXcd;

// Index of |g,n> is 2n, of |e,n> is 2n+1.
Ladder ladder_rhs(const Ladder& y, double detuning, cplx coupling, int n_max) {
  Ladder out = Ladder::Zero(y.size());
  for (int n = 0; n <= n_max; ++n) out(2 * n + 1) = detuning * y(2 * n + 1);
  for (int n = 0; n < n_max; ++n) {
    const double s = std::sqrt(static_cast<double>(n + 1));
    // coupling * a^dag |g><e| takes |e,n> to |g,n+1>.
    out(2 * n + 2) += coupling * s * y(2 * n + 1);
    out(2 * n + 1) += std::conj(coupling) * s * y(2 * n + 2);
  }
  return -I * out;
}

double excited_population(const Ladder& y) {
  double pe = 0.0;
  for (Eigen::Index k = 1; k < y.size(); k += 2) pe += std::norm(y(k));
  return pe;
}

}  // namespace

void DriveParams::validate() const {
  const bool finite = std::isfinite(lambda_r) && std::isfinite(omega_r) && std::isfinite(omega_0) &&
                      std::isfinite(epsilon) && std::isfinite(nu);
  if (!finite) fail(ErrorKind::invalid_argument, "drive parameters must be finite");
  if (!(nu > 0.0)) fail(ErrorKind::invalid_argument, "modulation frequency must be positive");
  if (lambda_r < 0.0 || epsilon < 0.0 || omega_r <= 0.0 || omega_0 <= 0.0) {
    fail(ErrorKind::invalid_argument, "drive frequencies and amplitudes must be positive");
  }
}

cplx effective_coupling(const DriveParams& d) {
  d.validate();
  return d.lambda_r * bessel_j1(d.modulation_index());
}

cplx effective_coupling_detuned(const DriveParams& d, double delta) {
  d.validate();
  if (!(d.nu + delta > 0.0)) fail(ErrorKind::invalid_argument, "nu + delta must be positive");
  return d.lambda_r * bessel_j1(d.epsilon / (d.nu + delta));
}

DrivenRun simulate_driven(const DriveParams& d, const FockTruncation& trunc, const SingleExcState& psi0,
                          double t, double dt, const DrivenOptions& opts) {
  d.validate();
  require(trunc.n_max >= 1, "n_max must be at least 1");
  require(t >= 0.0 && dt > 0.0, "simulate_driven: need t >= 0 and dt > 0");
  require(dt <= 0.05 * two_pi / d.nu * (1.0 + 1e-12), "simulate_driven: dt must resolve the modulation");
  require(opts.record_stride >= 1, "record_stride must be positive");

  const int n_max = trunc.n_max;
  const double mu = d.modulation_index();
  const double detuning = d.detuning();
  auto coupling = [&](double s) { return d.lambda_r * std::exp(I * (d.nu * s - mu * std::sin(d.nu * s))); };

  Ladder y = Ladder::Zero(2 * (n_max + 1));
  const SingleExcState start = SingleExcState::normalized(psi0.vec());
  y(1) = start.c_e0();
  y(2) = start.c_g1();

  DrivenRun run;
  auto record = [&](double now) {
    run.times.push_back(now);
    run.excited_population.push_back(excited_population(y));
  };
  auto top = [&] { return std::norm(y(2 * n_max)) + std::norm(y(2 * n_max + 1)); };

  const auto steps = static_cast<long>(std::ceil(t / dt - 1e-9));
  record(0.0);
  double now = 0.0;
  for (long k = 1; k <= steps; ++k) {
    const double h = std::min(dt, t - now);
    if (h <= 0.0) break;
    const cplx c0 = coupling(now);
    const cplx cm = coupling(now + 0.5 * h);
    const cplx c1 = coupling(now + h);
    const Ladder k1 = ladder_rhs(y, detuning, c0, n_max);
    const Ladder k2 = ladder_rhs(y + 0.5 * h * k1, detuning, cm, n_max);
    const Ladder k3 = ladder_rhs(y + 0.5 * h * k2, detuning, cm, n_max);
    const Ladder k4 = ladder_rhs(y + h * k3, detuning, c1, n_max);
    y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    now = k == steps ? t : now + h;

    run.top_level_population = std::max(run.top_level_population, top());
    if (run.top_level_population > opts.overflow_tolerance) {
      fail(ErrorKind::truncation, "population in the top Fock level exceeds tolerance");
    }
    if (k % opts.record_stride == 0 || k == steps) record(now);
  }
  return run;
}

RabiFit fit_rabi(const std::vector<double>& times, const std::vector<double>& pe, double omega_guess) {
  require(times.size() == pe.size() && times.size() >= 4, "fit_rabi: need at least 4 samples");
  require(omega_guess > 0.0, "fit_rabi: omega guess must be positive");
  auto model = [](double omega, double amp, double t) {
    const double s = std::sin(0.5 * omega * t);
    return 1.0 - amp * s * s;
  };
  auto sse = [&](std::span<const double> x) {
    double acc = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
      const double r = pe[i] - model(x[0], x[1], times[i]);
      acc += r * r;
    }
    return acc;
  };
  SimplexOptions opts;
  opts.size_tolerance = 1e-12;
  opts.max_evaluations = 20000;
  const SimplexResult res = nelder_mead(sse, {omega_guess, 1.0}, {0.02 * omega_guess, 0.05}, opts);
  RabiFit fit;
  fit.omega = res.x[0];
  fit.amplitude = res.x[1];
  fit.rms = std::sqrt(res.value / static_cast<double>(times.size()));
  return fit;
}

DriveValidation validate_drive(double lambda_r, double nu, double mu, double periods,
                               int steps_per_modulation) {
  require(lambda_r > 0.0 && nu > 0.0 && mu > 0.0, "validate_drive: lambda_r, nu and mu must be positive");
  require(periods > 0.0 && steps_per_modulation >= 20, "validate_drive: invalid resolution");

  DriveValidation out;
  out.mu = mu;
  out.predicted_coupling = lambda_r * bessel_j1(mu);
  const double lam = out.predicted_coupling;
  const double dt = two_pi / nu / steps_per_modulation;
  const FockTruncation trunc{2};

  // omega_r is arbitrary in the rotating frame; it only fixes omega_0.
  const double omega_r = two_pi * 6656.0;
  auto make_drive = [&](double detuning) {
    return DriveParams{lambda_r, omega_r, omega_r - nu + detuning, mu * nu, nu};
  };

  // The carrier term contributes a dispersive shift ~ 2 (lambda_r J0)^2 / nu;
  // complete exchange sits near there rather than at zero detuning.
  const double j0 = lambda_r * bessel_j0(mu);
  const double shift = 2.0 * j0 * j0 / nu;
  const double half_period = pi / lam;
  auto min_pe = [&](double detuning) {
    const DrivenRun r = simulate_driven(make_drive(detuning), trunc, SingleExcState::excited(),
                                        0.75 * half_period, dt);
    return *std::min_element(r.excited_population.begin(), r.excited_population.end());
  };
  out.detuning = scan_minimize(min_pe, shift - 0.5 * lam, shift + 0.5 * lam, 12, 1e-6 * lam);
  out.drive = make_drive(out.detuning);

  out.run = simulate_driven(out.drive, trunc, SingleExcState::excited(), periods * half_period, dt);
  out.min_population = *std::min_element(out.run.excited_population.begin(), out.run.excited_population.end());
  // Box-average over one modulation period to strip the micromotion before fitting.
  const auto& pe = out.run.excited_population;
  const auto window = static_cast<std::size_t>(steps_per_modulation);
  std::vector<double> t_avg;
  std::vector<double> pe_avg;
  double acc = 0.0;
  for (std::size_t k = 0; k < pe.size(); ++k) {
    acc += pe[k];
    if (k >= window) acc -= pe[k - window];
    if (k + 1 >= window) {
      t_avg.push_back(0.5 * (out.run.times[k + 1 - window] + out.run.times[k]));
      pe_avg.push_back(acc / static_cast<double>(window));
    }
  }
  out.fit = fit_rabi(t_avg, pe_avg, 2.0 * lam);
  return out;
}

}  // namespace wer

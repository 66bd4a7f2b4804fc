#pragma once

#include <cstdint>
#include <vector>

#include "wer/nh_core.hpp"

namespace wer {

// ---------------------------------------------------------------------------
// Effective (single-excitation) dynamics
// ---------------------------------------------------------------------------

struct NoJumpResult {
  SingleExcState state;   ///< normalized conditional state
  double survival = 1.0;  ///< probability that no photon has leaked
};

/// exp(-i H_NH t) psi0 through the biorthogonal decomposition; falls back to
/// a dense matrix exponential when the point is within EP tolerance.
[[nodiscard]] NoJumpResult propagate_nojump(const SystemParams& p, const SingleExcState& psi0, double t);

/// Unnormalized amplitudes exp(-i H_NH t) psi0.
[[nodiscard]] Vec2 nojump_amplitudes(const SystemParams& p, const SingleExcState& psi0, double t);

/// Embedding of the single-excitation block into (|g,0>, |e,0>, |g,1>).
[[nodiscard]] Mat3 nh_hamiltonian3(const SystemParams& p);

/// Right-hand side -i(H rho - rho H^dag) + kappa a rho a^dag.
[[nodiscard]] Mat3 lindblad_rhs(const Mat3& rho, const SystemParams& p);

/// Throws Error(invalid_argument) unless rho is Hermitian, unit-trace and PSD within tol.
void check_density(const Mat3& rho, double tol = 1e-10);

/// One classical RK4 step of the master equation.
[[nodiscard]] Mat3 lindblad_step(const Mat3& rho, const SystemParams& p, double dt);

/// Fixed-step RK4 integration to time t (the last step is shortened to land on t).
[[nodiscard]] Mat3 evolve_master(const Mat3& rho0, const SystemParams& p, double t, double dt);

struct MasterRun {
  Mat3 rho;
  double error_estimate = 0.0;  ///< max |rho(dt) - rho(dt/2)|
};

/// evolve_master at dt and dt/2; throws Error(convergence_failure) when the two
/// disagree by more than `tolerance`. Returns the dt/2 result.
[[nodiscard]] MasterRun evolve_master_checked(const Mat3& rho0, const SystemParams& p, double t,
                                              double dt, double tolerance = 1e-7);

/// Closed-form solution of the master equation for a pure single-excitation
/// initial state: survival * |psi><psi| + (1 - survival) |g,0><g,0|.
[[nodiscard]] Mat3 master_solution(const SystemParams& p, const SingleExcState& psi0, double t);

[[nodiscard]] Mat3 density_from_state(const SingleExcState& psi);

struct TrajectoryRecord {
  std::vector<double> times;         ///< us, strictly increasing
  std::vector<Vec3> states;          ///< (|g,0>, |e,0>, |g,1>) amplitudes, normalized
  std::vector<double> jump_times;    ///< us
  std::vector<double> norm_history;  ///< no-jump survival probability at each time
};

/// splitmix64 mixing of (master seed, index): per-trajectory seeds independent
/// of scheduling order.
[[nodiscard]] std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

/// Monte Carlo unraveling with jump operator sqrt(kappa) a. The jump time is
/// drawn by inverting the no-jump survival, so the record is exact at the
/// sampled times; `dt` only sets the output grid and must satisfy kappa dt < 0.1.
[[nodiscard]] TrajectoryRecord jump_trajectory(std::uint64_t seed, const SingleExcState& psi0,
                                               const SystemParams& p, double t, double dt);

// ---------------------------------------------------------------------------
// Parametric sideband drive
// ---------------------------------------------------------------------------

/// Bessel function J1. Power series for |x| <= 8, libstdc++ beyond.
[[nodiscard]] double bessel_j1(double x);
[[nodiscard]] double bessel_j0(double x);

/// Inverse of J1 on its rising branch [0, 1.8411...]; throws if target > max J1.
[[nodiscard]] double inverse_bessel_j1(double target);

inline constexpr double bessel_j1_first_max = 1.8411837813406593;

struct DriveParams {
  double lambda_r = 0.0;  ///< on-resonance coupling
  double omega_r = 0.0;   ///< resonator frequency
  double omega_0 = 0.0;   ///< mean qubit frequency
  double epsilon = 0.0;   ///< modulation amplitude
  double nu = 0.0;        ///< modulation frequency

  void validate() const;
  [[nodiscard]] double modulation_index() const { return epsilon / nu; }
  /// Sideband detuning omega_0 + nu - omega_r.
  [[nodiscard]] double detuning() const { return omega_0 + nu - omega_r; }
};

struct FockTruncation {
  int n_max = 2;
};

/// lambda_r J1(epsilon / nu).
[[nodiscard]] cplx effective_coupling(const DriveParams& d);

/// lambda_r J1(epsilon / (nu + delta)); requires nu + delta > 0.
[[nodiscard]] cplx effective_coupling_detuned(const DriveParams& d, double delta);

struct DrivenOptions {
  double overflow_tolerance = 1e-6;  ///< max population allowed in the top Fock level
  int record_stride = 1;             ///< keep every n-th step
};

struct DrivenRun {
  std::vector<double> times;
  std::vector<double> excited_population;  ///< qubit P_e(t)
  double top_level_population = 0.0;       ///< max over the run
};

/// Integrates the rotating-frame modulated Hamiltonian
///   detuning |e><e| + [e^{-i mu sin(nu t)} e^{i nu t} lambda_r a^dag |g><e| + h.c.]
/// on a truncated ladder (no dissipation) with RK4. Requires dt <= 0.05 * 2pi/nu.
[[nodiscard]] DrivenRun simulate_driven(const DriveParams& d, const FockTruncation& trunc,
                                        const SingleExcState& psi0, double t, double dt,
                                        const DrivenOptions& opts = {});

struct RabiFit {
  double omega = 0.0;      ///< oscillation angular frequency
  double amplitude = 0.0;  ///< exchange depth A in P_e = 1 - A sin^2(omega t / 2)
  double rms = 0.0;
};

/// Least-squares fit of P_e(t) = 1 - A sin^2(omega t / 2).
[[nodiscard]] RabiFit fit_rabi(const std::vector<double>& times, const std::vector<double>& pe,
                               double omega_guess);

struct DriveValidation {
  DriveParams drive;       ///< with omega_0 tuned to the complete-exchange point
  double mu = 0.0;
  double predicted_coupling = 0.0;  ///< lambda_r J1(mu)
  double detuning = 0.0;            ///< sideband detuning at complete exchange
  RabiFit fit;
  double min_population = 1.0;
  DrivenRun run;

  [[nodiscard]] double ratio() const { return fit.omega / (2.0 * predicted_coupling); }
};

/// Tunes the sideband detuning to the point of complete Q-R exchange (the
/// carrier shifts the resonance away from delta = nu), then fits the vacuum
/// Rabi frequency there. `periods` Rabi periods are simulated.
[[nodiscard]] DriveValidation validate_drive(double lambda_r, double nu, double mu,
                                             double periods = 2.0, int steps_per_modulation = 64);

}  // namespace wer

#pragma once

#include <array>
#include <optional>
#include <vector>

#include "wer/nh_core.hpp"
#include "wer/optimize.hpp"

namespace wer {

/// Fitted eigensystem in the traceless gauge: E_n = a_n + i b_n with
/// a_2 = -a_1, b_2 = -b_1, and |u_n> = c_n e^{i d_n}|e,0> + sqrt(1 - c_n^2)|g,1>.
struct EigenFitParams {
  std::array<double, 2> a{};
  std::array<double, 2> b{};
  std::array<double, 2> c{};
  std::array<double, 2> d{};

  [[nodiscard]] cplx energy(int n) const { return {a[n], b[n]}; }
  [[nodiscard]] Vec2 vector(int n) const;
  /// Exchanges the two modes.
  [[nodiscard]] EigenFitParams swapped() const;
};

/// Traceless-gauge parameters of the analytic eigensystem.
[[nodiscard]] EigenFitParams analytic_fit_params(const SystemParams& p);

/// Biorthogonal eigensystem from fitted parameters, energies shifted by `offset`
/// (use physical_offset(p) to return to the gauge of the full Hamiltonian).
[[nodiscard]] BiorthEigensystem to_eigensystem(const EigenFitParams& f, cplx offset = 0.0);

/// Half the trace of H: (2 delta - i kappa) / 4.
[[nodiscard]] cplx physical_offset(const SystemParams& p);

/// |<a|b>|^2 for unit vectors.
[[nodiscard]] double eigvec_fidelity(const Vec2& a, const Vec2& b);

/// Normalized no-jump state from |e,0> predicted by the fitted eigensystem.
/// Throws Error(degenerate_basis) if the two vectors are nearly parallel.
[[nodiscard]] SingleExcState predict_trajectory(const EigenFitParams& f, double t);

/// Share of |e,0> carried by each fitted mode, |C_n|^2 / (|C_1|^2 + |C_2|^2)
/// for unit eigenvectors. A weakly excited mode is weakly constrained by the data.
[[nodiscard]] std::array<double, 2> modal_weights(const EigenFitParams& f);

struct TimedDensity {
  double t = 0.0;
  Mat2 rho;  ///< unit trace, (|e,0>, |g,1>)
};

struct FitOptions {
  double kappa = 5.0;
  int restarts = 8;
  SimplexOptions simplex{.polish_restarts = 4};
  /// When set, fitted modes are ordered by maximal overlap with this reference;
  /// otherwise mode 1 is the one with the principal-branch sign (a_1 > 0).
  std::optional<BiorthEigensystem> reference;
};

struct FitReport {
  EigenFitParams params;
  double residual = 0.0;  ///< 1 - mean fidelity over the time points
  int iterations = 0;
  bool converged = false;
  int restart = 0;  ///< index of the winning restart
  std::vector<double> fidelities;
  bool low_confidence = false;  ///< fitted energy gap below 0.05 kappa
  std::array<double, 2> modal_weight{};  ///< see modal_weights
};

/// Average-fidelity objective 1 - (1/N) sum_i Tr[rho_i |psi(t_i)><psi(t_i)|].
[[nodiscard]] double fit_objective(const EigenFitParams& f, const std::vector<TimedDensity>& data);

/// Simplex search over the six free parameters with deterministic restarts.
/// Throws Error(convergence_failure) if no restart converges.
[[nodiscard]] FitReport fit_eigensystem(const std::vector<TimedDensity>& data, const EigenFitParams& guess,
                                        const FitOptions& opts = {});

struct Calibration {
  double lambda_abs = 0.0;
  double delta = 0.0;
  double residual = 0.0;  ///< mean squared population error
  int iterations = 0;
  bool converged = false;
};

struct PopulationSample {
  double t = 0.0;
  double pe = 0.0;
};

/// Unconditional excited-state population |<e,0| exp(-i H t) |e,0>|^2.
[[nodiscard]] double excited_population(const SystemParams& p, double t);

/// Least-squares fit of (|lambda|, delta) to P_e(t). The population is even in
/// delta, so the sign of the guess selects the branch.
[[nodiscard]] Calibration calibrate_params(const std::vector<PopulationSample>& observed,
                                           const SystemParams& guess, double kappa);

/// N points t_i = T (i+1)/N with T = min(2 pi / |Re(E1 - E2)|, 4 / kappa).
[[nodiscard]] std::vector<double> default_time_grid(const SystemParams& p, int n = 24);

/// |lambda| < 0.05 kappa: eigenvectors from such a fit are not trusted.
[[nodiscard]] bool small_coupling(double lambda_abs, double kappa);

}  // namespace wer

#pragma once

#include <array>
#include <functional>
#include <vector>

#include "wer/nh_core.hpp"

namespace wer {

/// Eigensystem at a parameter-space point: analytic or reconstructed.
using EigenSource = std::function<BiorthEigensystem(const BVector&)>;

[[nodiscard]] EigenSource analytic_source(double kappa);

/// Circle in the B_x-B_z plane (B_y = 0).
struct LoopSpec {
  double center_bx = 2.5;
  double center_bz = 0.0;
  double radius = 1.0;
  int steps = 512;  ///< points per cycle
  int cycles = 1;

  void validate() const;
};

/// Loop centred at (B_x = kappa/2, B_z = 0).
[[nodiscard]] LoopSpec centred_loop(double kappa, double radius, int steps = 512, int cycles = 1);

/// steps * cycles + 1 points; later cycles repeat the first one bit-for-bit.
[[nodiscard]] std::vector<BVector> loop_points(const LoopSpec& spec);

/// Whether the loop winds around the ring's crossing of the B_x axis at +kappa/4.
[[nodiscard]] bool encircles_ring(const LoopSpec& spec, double kappa);

/// Eigensystems relabelled so that index n follows one continued mode.
struct ModeTrack {
  std::vector<BVector> points;
  std::vector<BiorthEigensystem> systems;
  int steps_per_cycle = 0;
  bool swapped_after_cycle = false;
  std::vector<int> skipped;  ///< indices dropped for EP proximity
};

/// Labels by maximal right-vector overlap with the previous point. Throws
/// Error(tracking_ambiguity) when a continued overlap falls below 1/sqrt(2).
[[nodiscard]] ModeTrack track_modes(const std::vector<BVector>& points, const EigenSource& source,
                                    int steps_per_cycle);
[[nodiscard]] ModeTrack track_modes(const std::vector<BVector>& points, double kappa, int steps_per_cycle);

/// Parallel transport: rephases right vector p+1 (and inversely its left
/// co-vector) so that <u^l_{p+1}|u^r_p> is real and positive.
[[nodiscard]] ModeTrack gauge_fix(const ModeTrack& track);

enum class BerrySum {
  link_log,  ///< i sum ln <l_p|r_{p+1}>
  linear,    ///< i sum <l_p|r_{p+1} - r_p>
};

struct BerryResult {
  std::array<double, 2> beta{};       ///< real part, branch (-3pi/2, pi/2]
  std::array<double, 2> beta_imag{};  ///< discretization residue
  int cycles = 1;
  bool swapped = false;
  int skipped = 0;
};

/// Berry phase of a gauge-fixed track, closing phase included.
[[nodiscard]] BerryResult berry_phase(const ModeTrack& fixed, BerrySum sum = BerrySum::link_log);

/// Runs one cycle, and a second one iff the modes swapped (spec.cycles is ignored).
[[nodiscard]] BerryResult berry_phase(const LoopSpec& spec, const EigenSource& source,
                                      BerrySum sum = BerrySum::link_log);

[[nodiscard]] double wrap_berry(double beta);

/// Sphere of radius r about the origin, B = r (sin t cos f, sin t sin f, cos t).
struct SphereSpec {
  double radius = 1.0;
  double theta_min = 0.05;
  double theta_max = pi - 0.05;
  int n_theta = 64;
  int n_phi = 64;

  void validate() const;
  [[nodiscard]] std::vector<double> theta_grid() const;
  [[nodiscard]] std::vector<double> phi_grid() const;
};

[[nodiscard]] BVector sphere_point(double radius, double theta, double phi);

/// Analytic eigensystem with labels continued from the north pole, where
/// mode 1 is |e,0>. The discriminant does not depend on phi, and below the
/// ring radius the principal branch swaps across the equator.
[[nodiscard]] BiorthEigensystem sphere_eigensystem(double radius, double kappa, double theta, double phi);

/// Right vector of mode n rephased so its |g,1> amplitude is real and >= 0.
[[nodiscard]] Vec2 sphere_gauge_vector(double radius, double kappa, double theta, double phi, int n);

struct Connection {
  std::array<double, 2> a_theta{};
  std::array<double, 2> a_phi{};
};

/// Right-right connection i<u|d u> by central differences in the gauge of
/// sphere_gauge_vector. Throws Error(pole_proximity) within 1e-3 of a pole.
[[nodiscard]] Connection berry_connection_sphere(double radius, double kappa, double theta, double phi,
                                                 double step = 1e-4);

/// Relative confidence of each mode of a source eigensystem.
using WeightSource = std::function<std::array<double, 2>(const BVector&)>;

struct MeridianCurve {
  std::vector<double> theta;
  std::vector<std::array<double, 2>> population;  ///< P_e0 per continued mode
  std::vector<std::array<double, 2>> weight;      ///< fit weights, permuted with the modes
};

/// P_e0 of the continued modes along phi = 0; data labels follow energy
/// continuity from theta_min. Without `weights` every mode counts equally.
[[nodiscard]] MeridianCurve meridian_populations(const SphereSpec& spec, const EigenSource& source,
                                                 const WeightSource& weights = {});

/// Analytic P_e0 for the continued modes.
[[nodiscard]] std::array<double, 2> model_populations(double radius, double kappa, double theta);

struct ChernResult {
  std::array<double, 2> chern{};
  std::array<int, 2> quantized{};
  double fitted_radius = 0.0;  ///< meridian method only
  double rms = 0.0;            ///< meridian fit residual
  double max_plaquette_phase = 0.0;  ///< integral method only
  MeridianCurve curve;               ///< meridian method only
};

/// Fits the single-parameter analytic family to the unordered per-theta
/// populations (weighted least squares) and evaluates P(pi) - P(0) on the
/// fitted curve. Throws Error(fit_quality) when the weighted RMS residual
/// exceeds 0.1.
[[nodiscard]] ChernResult chern_meridian(const SphereSpec& spec, double kappa, const EigenSource& source,
                                         const WeightSource& weights = {});

/// Plaquette sum over a full n_theta x n_phi grid including the poles.
/// Throws Error(refine_grid) if any plaquette phase exceeds pi/2.
[[nodiscard]] ChernResult chern_integral(const SphereSpec& spec, double kappa);

struct Transition {
  double critical = 0.0;
  double width = 0.0;  ///< bracket width
  std::size_t index = 0;  ///< first radius of the bracketing pair
};

/// First adjacent pair whose values differ by >= 0.5. Throws Error(no_transition).
[[nodiscard]] Transition detect_transition(const std::vector<double>& radii, const std::vector<double>& values);

}  // namespace wer

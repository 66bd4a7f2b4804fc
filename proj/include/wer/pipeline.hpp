#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wer/entanglement.hpp"
#include "wer/estimation.hpp"
#include "wer/tomography.hpp"
#include "wer/topology.hpp"

namespace wer {

enum class SourceMode { analytic, synthetic_noiseless, synthetic_shots };

[[nodiscard]] std::string to_string(SourceMode m);

struct PipelineOptions {
  SourceMode mode = SourceMode::analytic;
  double kappa = 5.0;
  MappingDelays mapping{};
  int time_points = 24;
  std::int64_t shots = 10000;  ///< per tomography setting and per population estimate
  int workers = 1;
};

/// One synthetic extraction: calibrate, simulate the tomography record, fit.
struct PointResult {
  SystemParams truth;
  Calibration calibration;
  FitReport fit;
  BiorthEigensystem fitted;              ///< physical gauge, labels follow the calibrated model
  std::array<double, 2> fidelity{};      ///< |<u_fit|u_true>|^2 per mode
  double min_success_probability = 1.0;  ///< smallest postselection rate over the record
  bool unreliable = false;               ///< |lambda| below 0.05 kappa
};

/// Postselected, mapping-corrected tomography record at the grid times;
/// `seed` only matters in shot mode.
[[nodiscard]] std::vector<TimedDensity> synthetic_record(const SystemParams& truth, const std::vector<double>& times,
                                                         const PipelineOptions& opts, std::uint64_t seed,
                                                         double* min_success = nullptr);

[[nodiscard]] std::vector<PopulationSample> synthetic_populations(const SystemParams& truth,
                                                                  const std::vector<double>& times,
                                                                  const PipelineOptions& opts, std::uint64_t seed);

[[nodiscard]] PointResult extract_point(const SystemParams& truth, const PipelineOptions& opts, std::uint64_t seed);

/// Fitted eigensystems at a set of points, usable as an EigenSource that
/// answers only for those exact points.
struct FittedSet {
  std::vector<BVector> points;
  std::vector<PointResult> results;

  [[nodiscard]] EigenSource source() const;
  [[nodiscard]] WeightSource weights() const;
};

[[nodiscard]] FittedSet fit_points(const std::vector<BVector>& points, const PipelineOptions& opts,
                                   std::uint64_t seed);

struct BerryRow {
  double radius = 0.0;
  BerryResult result;
  double min_fidelity = 1.0;
  double median_fidelity = 1.0;
  std::vector<BVector> points;            ///< one cycle
  std::vector<BiorthEigensystem> systems;  ///< source eigensystems at `points`
  std::string error;
};

struct BerrySweep {
  std::vector<BerryRow> rows;
  std::optional<Transition> transition;
  std::string transition_error;
};

/// Analytic runs use `steps` points per cycle, synthetic runs `fitted_steps`.
[[nodiscard]] BerrySweep berry_sweep(const std::vector<double>& radii, int steps, int fitted_steps,
                                     const PipelineOptions& opts, std::uint64_t seed);

struct ChernRow {
  double radius = 0.0;
  ChernResult meridian;
  ChernResult integral;
  std::vector<PointResult> fits;  ///< synthetic meridian points
  std::string error;
};

struct ChernSweep {
  std::vector<ChernRow> rows;
  std::optional<Transition> transition;
  std::string transition_error;
};

struct ChernGrid {
  int n_theta = 64;
  int n_phi = 64;
  int meridian_points = 24;
  double theta_margin = 0.05;  ///< analytic meridian range [margin, pi - margin]
};

/// Meridian theta range for a radius: synthetic runs also stay clear of
/// |lambda| < 0.06 kappa, where fits are unreliable.
[[nodiscard]] SphereSpec meridian_spec(double radius, const ChernGrid& grid, const PipelineOptions& opts);

[[nodiscard]] ChernSweep chern_sweep(const std::vector<double>& radii, const ChernGrid& grid,
                                     const PipelineOptions& opts, std::uint64_t seed);

[[nodiscard]] double median(std::vector<double> v);

}  // namespace wer

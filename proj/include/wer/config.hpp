#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "wer/pipeline.hpp"
#include "wer/units.hpp"

namespace wer {

/// Malformed or out-of-range configuration (CLI exit code 1).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PipelineConfig {
  SourceMode mode = SourceMode::analytic;
  std::int64_t shots = 10000;
  int seeds = 1;
  int time_points = 24;
  MappingDelays mapping{};
};

struct BerryConfig {
  std::vector<double> radii_over_kappa{0.10, 0.126, 0.15, 0.20, 0.22, 0.24, 0.26, 0.28, 0.30, 0.35, 0.40, 0.427};
  int steps = 512;
  int fitted_steps = 64;
};

struct ChernConfig {
  std::vector<double> radii_over_kappa{0.151, 0.18, 0.22, 0.24, 0.26, 0.28, 0.30, 0.41, 0.503};
  std::vector<double> curve_radii_mhz{0.12, 0.14, 0.18, 0.22, 0.27, 0.32, 0.40};
  ChernGrid grid{};
};

struct ConcurrenceConfig {
  std::vector<double> radii_mhz{0.18, 0.34};
  double center_over_kappa = 0.5;
  int steps = 512;
  std::vector<double> e_pi_radii_over_kappa;  ///< empty: 0.01 .. 0.49 in steps of 0.01
};

struct DriveConfig {
  std::vector<double> j1_targets{0.05, 0.10, 0.15};
  std::vector<double> nu_mhz{660.0};
  double periods = 2.0;
  int steps_per_modulation = 64;
};

struct RunConfig {
  double kappa = units::kappa;
  double lambda_r = units::lambda_r;
  std::uint64_t seed = 0;
  int workers = 1;
  std::string output_dir = "out";
  PipelineConfig pipeline{};
  BerryConfig berry{};
  ChernConfig chern{};
  ConcurrenceConfig concurrence{};
  DriveConfig drive{};

  /// Throws ConfigError on out-of-range values.
  void validate() const;
  [[nodiscard]] PipelineOptions pipeline_options() const;
  [[nodiscard]] std::vector<double> e_pi_radii() const;
};

/// Strict parse: unknown keys and wrong types raise ConfigError. Missing keys
/// keep their defaults.
[[nodiscard]] RunConfig parse_config(const nlohmann::json& j);
[[nodiscard]] RunConfig load_config(const std::filesystem::path& path);

/// Every key with its value; parse_config(to_json(c)) reproduces c.
[[nodiscard]] nlohmann::json to_json(const RunConfig& c);

/// FNV-1a 64 of the canonical JSON text, ignoring output_dir and workers.
[[nodiscard]] std::uint64_t config_hash(const RunConfig& c);

[[nodiscard]] SourceMode parse_mode(const std::string& s);

}  // namespace wer

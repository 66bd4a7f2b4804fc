#pragma once

#include <filesystem>
#include <iosfwd>

#include <json.hpp>

#include "wer/config.hpp"

namespace wer::cli {

enum ExitCode : int { ok = 0, config_error = 1, domain_error = 2, convergence_error = 3 };

// Each command writes its files into config.output_dir (created if needed)
// and returns the summary it also writes as JSON.
nlohmann::json cmd_berry(const RunConfig& config);
nlohmann::json cmd_chern(const RunConfig& config);
nlohmann::json cmd_concurrence(const RunConfig& config);
nlohmann::json cmd_validate_drive(const RunConfig& config);
nlohmann::json cmd_pipeline(const RunConfig& config);

/// Energies and vectors at one point; throws Error(ep_proximity) on the ring.
nlohmann::json cmd_eigensystem(double lambda, double lambda_phase, double delta, double kappa);

/// Runs `body` and maps failures to exit codes, reporting them on `err`.
int guarded(std::ostream& err, const std::function<void()>& body);

}  // namespace wer::cli

#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "commands.hpp"
#include "wer/output.hpp"

using namespace wer;

int main(int argc, char** argv) {
  CLI::App app{"Exceptional-ring topology toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  app.add_option("--config", config_path, "JSON run configuration");
  app.add_option("--out", out_dir, "output directory (overrides output_dir)");
  app.add_option("--seed", seed, "master seed (overrides seed)");
  app.add_option("--workers", workers, "worker threads (overrides workers)");
  app.fallthrough();

  double lambda = 0.0, phase = 0.0, delta = 0.0, kappa = units::kappa;
  auto* eig = app.add_subcommand("eigensystem", "energies and biorthogonal vectors at one point");
  eig->add_option("--lambda", lambda, "coupling magnitude, rad/us")->required();
  eig->add_option("--lambda-phase", phase, "coupling phase, rad");
  eig->add_option("--delta", delta, "detuning, rad/us")->required();
  eig->add_option("--kappa", kappa, "photon decay rate, rad/us");

  auto* berry = app.add_subcommand("berry", "Berry phase versus loop radius (fig2b.csv)");
  auto* chern = app.add_subcommand("chern", "Chern numbers versus sphere radius (fig3e.csv, fig3cd.csv)");
  auto* conc = app.add_subcommand("concurrence", "eigenstate concurrence (fig2c.csv, fig2d.csv)");
  auto* drive = app.add_subcommand("validate-drive", "full driven simulation against the effective coupling");
  auto* pipe = app.add_subcommand("pipeline", "synthetic end-to-end runs over seeds (pipeline_points.csv)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return cli::config_error;
  }

  return cli::guarded(std::cerr, [&] {
    if (*eig) {
      std::cout << cli::cmd_eigensystem(lambda, phase, delta, kappa).dump(2) << '\n';
      return;
    }
    RunConfig config = config_path.empty() ? RunConfig{} : load_config(config_path);
    if (out_dir) config.output_dir = *out_dir;
    if (seed) config.seed = *seed;
    if (workers) config.workers = *workers;
    config.validate();

    nlohmann::json summary;
    if (*berry) summary = cli::cmd_berry(config);
    if (*chern) summary = cli::cmd_chern(config);
    if (*conc) summary = cli::cmd_concurrence(config);
    if (*drive) summary = cli::cmd_validate_drive(config);
    if (*pipe) summary = cli::cmd_pipeline(config);
    std::cout << summary.dump(2) << '\n';
  });
}

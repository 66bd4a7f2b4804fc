#include "commands.hpp"

#include <ostream>

#include "wer/dynamics.hpp"
#include "wer/entanglement.hpp"
#include "wer/output.hpp"
#include "wer/units.hpp"

namespace wer::cli {

using nlohmann::json;

namespace {

std::filesystem::path prepare_output(const RunConfig& c) {
  std::filesystem::path dir(c.output_dir);
  std::filesystem::create_directories(dir);
  return dir;
}

CsvMeta meta(const RunConfig& c, const char* kind) { return {kind, config_hash(c), c.seed}; }

std::vector<double> scaled(const std::vector<double>& v, double factor) {
  std::vector<double> out;
  for (double x : v) out.push_back(x * factor);
  return out;
}

json header(const RunConfig& c, const char* kind) {
  char hash[17];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(config_hash(c)));
  return {{"kind", kind},
          {"schema", csv_schema_version},
          {"config_hash", hash},
          {"seed", c.seed},
          {"mode", to_string(c.pipeline.mode)},
          {"kappa", c.kappa}};
}

template <class Rows>
int failed_rows(const Rows& rows) {
  int n = 0;
  for (const auto& r : rows) n += r.error.empty() ? 0 : 1;
  return n;
}

}  // namespace

json cmd_berry(const RunConfig& config) {
  const auto dir = prepare_output(config);
  const BerrySweep sweep = berry_sweep(scaled(config.berry.radii_over_kappa, config.kappa), config.berry.steps,
                                       config.berry.fitted_steps, config.pipeline_options(), config.seed);
  berry_table(sweep, config.kappa).write(dir / "fig2b.csv", meta(config, "fig2b"));

  json s = header(config, "berry");
  s["transition"] = to_json(sweep.transition, sweep.transition_error);
  s["failed_rows"] = failed_rows(sweep.rows);
  s["reference"] = {{"critical", config.kappa / 4.0}, {"beta_over_pi_outside", 0.0}, {"beta_over_pi_inside", -1.0}};
  write_json(dir / "berry_summary.json", s);
  return s;
}

json cmd_chern(const RunConfig& config) {
  const auto dir = prepare_output(config);
  const ChernSweep sweep = chern_sweep(scaled(config.chern.radii_over_kappa, config.kappa), config.chern.grid,
                                       config.pipeline_options(), config.seed);
  chern_table(sweep, config.kappa).write(dir / "fig3e.csv", meta(config, "fig3e"));
  meridian_table(scaled(config.chern.curve_radii_mhz, two_pi), sweep, config.chern.grid, config.kappa)
      .write(dir / "fig3cd.csv", meta(config, "fig3cd"));

  json s = header(config, "chern");
  s["transition"] = to_json(sweep.transition, sweep.transition_error);
  s["failed_rows"] = failed_rows(sweep.rows);
  s["reference"] = {{"critical", config.kappa / 4.0}, {"chern_outside", {0, 0}}, {"chern_inside", {-1, 1}}};
  write_json(dir / "chern_summary.json", s);
  return s;
}

json cmd_concurrence(const RunConfig& config) {
  const auto dir = prepare_output(config);
  const double center = config.concurrence.center_over_kappa * config.kappa;
  std::vector<ConcurrenceCurve> curves;
  std::vector<int> modes;
  json loops = json::array();
  for (double f : config.concurrence.radii_mhz) {
    LoopSpec spec;
    spec.center_bx = center;
    spec.radius = units::from_mhz(f);
    spec.steps = config.concurrence.steps;
    for (int n = 0; n < 2; ++n) {
      curves.push_back(concurrence_vs_phi(spec, n, analytic_source(config.kappa), config.kappa));
      modes.push_back(n);
    }
    loops.push_back({{"radius", spec.radius},
                     {"radius_mhz", f},
                     {"e_0", curves[curves.size() - 2].value.front()},
                     {"e_pi", e_pi(spec.radius, center, config.kappa)}});
  }
  concurrence_table(curves, modes).write(dir / "fig2c.csv", meta(config, "fig2c"));

  const auto radii = config.e_pi_radii();
  const auto values = e_pi_vs_radius(radii, center, config.kappa);
  e_pi_table(radii, values, center, config.kappa).write(dir / "fig2d.csv", meta(config, "fig2d"));

  json s = header(config, "concurrence");
  s["center"] = center;
  s["loops"] = loops;
  try {
    const KinkEstimate k = locate_kink(radii, values);
    s["kink"] = {{"location", k.location},
                 {"slope_below", k.slope_below},
                 {"slope_above", k.slope_above},
                 {"slope_jump", k.slope_below - k.slope_above}};
  } catch (const Error& e) {
    s["kink"] = {{"error", e.what()}};
  }
  s["reference"] = {{"kink", center - config.kappa / 4.0}, {"slope_jump", 4.0 / config.kappa}};
  write_json(dir / "concurrence_summary.json", s);
  return s;
}

json cmd_validate_drive(const RunConfig& config) {
  const auto dir = prepare_output(config);
  std::vector<DriveValidation> runs;
  json rows = json::array();
  for (double nu : config.drive.nu_mhz) {
    for (double j1 : config.drive.j1_targets) {
      const double mu = inverse_bessel_j1(j1);
      runs.push_back(validate_drive(config.lambda_r, units::from_mhz(nu), mu, config.drive.periods,
                                    config.drive.steps_per_modulation));
      const auto& v = runs.back();
      rows.push_back({{"j1_target", j1},
                      {"mu", mu},
                      {"nu_mhz", nu},
                      {"omega_fit", v.fit.omega},
                      {"omega_predicted", 2.0 * v.predicted_coupling},
                      {"ratio", v.ratio()},
                      {"detuning", v.detuning},
                      {"min_population", v.min_population},
                      {"fit_rms", v.fit.rms}});
    }
  }
  rabi_table(runs).write(dir / "rabi.csv", meta(config, "rabi"));
  json s = header(config, "rabi");
  s["lambda_r"] = config.lambda_r;
  s["runs"] = rows;
  write_json(dir / "rabi_summary.json", s);
  return s;
}

json cmd_pipeline(const RunConfig& config) {
  if (config.pipeline.mode == SourceMode::analytic)
    throw ConfigError("the pipeline command needs pipeline.mode synthetic-noiseless or synthetic-shots");
  const auto dir = prepare_output(config);
  const auto opts = config.pipeline_options();
  const auto radii = scaled(config.chern.radii_over_kappa, config.kappa);

  std::vector<ChernSweep> sweeps;
  for (int k = 0; k < config.pipeline.seeds; ++k)
    sweeps.push_back(chern_sweep(radii, config.chern.grid, opts, derive_seed(config.seed, k)));

  std::vector<PointRow> rows;
  std::vector<double> all;
  json per_seed = json::array();
  int within = 0;
  for (int k = 0; k < config.pipeline.seeds; ++k) {
    const ChernSweep& sw = sweeps[k];
    std::vector<double> fids;
    for (const auto& row : sw.rows) {
      if (row.fits.empty()) continue;
      const auto theta = meridian_spec(row.radius, config.chern.grid, opts).theta_grid();
      for (std::size_t i = 0; i < row.fits.size(); ++i) {
        rows.push_back({k, row.radius, theta[i], &row.fits[i]});
        for (double f : row.fits[i].fidelity)
          if (std::isfinite(f)) fids.push_back(f);
      }
    }
    all.insert(all.end(), fids.begin(), fids.end());
    const bool hit = sw.transition && std::abs(sw.transition->critical - config.kappa / 4.0) <= 0.1 * config.kappa / 4.0;
    within += hit ? 1 : 0;
    json chern = json::array();
    for (const auto& row : sw.rows) chern.push_back(row.error.empty() ? json(row.meridian.chern) : json(nullptr));
    per_seed.push_back({{"seed_index", k},
                        {"median_fidelity", fids.empty() ? json(nullptr) : json(median(fids))},
                        {"transition", to_json(sw.transition, sw.transition_error)},
                        {"within_10_percent", hit},
                        {"chern_meridian", chern},
                        {"failed_rows", failed_rows(sw.rows)}});
  }
  points_table(rows).write(dir / "pipeline_points.csv", meta(config, "points"));

  json s = header(config, "pipeline");
  s["radii"] = radii;
  s["seeds"] = per_seed;
  s["median_fidelity"] = all.empty() ? json(nullptr) : json(median(all));
  s["transitions_within_10_percent"] = within;
  s["reference"] = {{"critical", config.kappa / 4.0}};
  write_json(dir / "pipeline_summary.json", s);
  return s;
}

json cmd_eigensystem(double lambda, double lambda_phase, double delta, double kappa) {
  const SystemParams p{std::polar(lambda, lambda_phase), delta, kappa};
  p.validate();
  const BiorthEigensystem es = eigensystem(p);
  const cplx disc = discriminant(p);
  return {{"lambda", {p.lambda.real(), p.lambda.imag()}},
          {"delta", delta},
          {"kappa", kappa},
          {"discriminant", {disc.real(), disc.imag()}},
          {"modes", to_json(es)}};
}

int guarded(std::ostream& err, const std::function<void()>& body) {
  try {
    body();
    return ok;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return config_error;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.kind() == ErrorKind::convergence_failure ? convergence_error : domain_error;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "config error: " << e.what() << '\n';
    return config_error;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return domain_error;
  }
}

}  // namespace wer::cli

#include "wer/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace wer {

using nlohmann::json;

namespace {

// Reads the keys of one JSON object and rejects whatever was not read.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(where() + ": expected an object");
  }

  void get(const char* key, double& out) {
    if (const json* v = take(key)) {
      if (!v->is_number()) throw ConfigError(where(key) + ": expected a number");
      out = v->get<double>();
    }
  }

  void get(const char* key, int& out) {
    if (const json* v = take(key)) {
      if (!v->is_number_integer()) throw ConfigError(where(key) + ": expected an integer");
      const auto x = v->get<std::int64_t>();
      if (x < -2147483648LL || x > 2147483647LL) throw ConfigError(where(key) + ": out of range");
      out = static_cast<int>(x);
    }
  }

  void get(const char* key, std::int64_t& out) {
    if (const json* v = take(key)) {
      if (!v->is_number_integer()) throw ConfigError(where(key) + ": expected an integer");
      out = v->get<std::int64_t>();
    }
  }

  void get(const char* key, std::uint64_t& out) {
    if (const json* v = take(key)) {
      if (!v->is_number_unsigned()) throw ConfigError(where(key) + ": expected a non-negative integer");
      out = v->get<std::uint64_t>();
    }
  }

  void get(const char* key, std::string& out) {
    if (const json* v = take(key)) {
      if (!v->is_string()) throw ConfigError(where(key) + ": expected a string");
      out = v->get<std::string>();
    }
  }

  void get(const char* key, std::vector<double>& out) {
    if (const json* v = take(key)) {
      if (!v->is_array()) throw ConfigError(where(key) + ": expected an array of numbers");
      out.clear();
      for (const auto& x : *v) {
        if (!x.is_number()) throw ConfigError(where(key) + ": expected an array of numbers");
        out.push_back(x.get<double>());
      }
    }
  }

  const json* child(const char* key) { return take(key); }

  [[nodiscard]] std::string where(const char* key = nullptr) const {
    std::string p = path_.empty() ? std::string("config") : path_;
    if (key != nullptr) p += std::string(".") + key;
    return p;
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (seen_.count(it.key()) == 0) throw ConfigError("unknown key " + where(it.key().c_str()));
  }

 private:
  const json* take(const char* key) {
    seen_.insert(key);
    const auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

void check(bool ok, const std::string& what) {
  if (!ok) throw ConfigError(what);
}

void check_positive(const std::vector<double>& v, const std::string& name) {
  for (double x : v) check(std::isfinite(x) && x > 0.0, name + " entries must be positive");
}

}  // namespace

SourceMode parse_mode(const std::string& s) {
  if (s == "analytic") return SourceMode::analytic;
  if (s == "synthetic-noiseless") return SourceMode::synthetic_noiseless;
  if (s == "synthetic-shots") return SourceMode::synthetic_shots;
  throw ConfigError("unknown pipeline mode '" + s + "'");
}

void RunConfig::validate() const {
  check(std::isfinite(kappa) && kappa > 0.0, "kappa must be positive");
  check(std::isfinite(lambda_r) && lambda_r > 0.0, "lambda_r must be positive");
  check(workers >= 1 && workers <= 256, "workers must be in [1, 256]");
  check(!output_dir.empty(), "output_dir must not be empty");

  check(pipeline.shots >= 1, "pipeline.shots must be >= 1");
  check(pipeline.seeds >= 1, "pipeline.seeds must be >= 1");
  check(pipeline.time_points >= 12, "pipeline.time_points must be >= 12");
  check(std::isfinite(pipeline.mapping.t1) && pipeline.mapping.t1 >= 0.0, "pipeline.mapping.t1 must be >= 0");
  check(std::isfinite(pipeline.mapping.t2) && pipeline.mapping.t2 >= 0.0, "pipeline.mapping.t2 must be >= 0");

  check_positive(berry.radii_over_kappa, "berry.radii_over_kappa");
  check(berry.steps >= 8, "berry.steps must be >= 8");
  check(berry.fitted_steps >= 8, "berry.fitted_steps must be >= 8");

  check_positive(chern.radii_over_kappa, "chern.radii_over_kappa");
  check_positive(chern.curve_radii_mhz, "chern.curve_radii_mhz");
  check(chern.grid.n_theta >= 4 && chern.grid.n_phi >= 4, "chern grid needs at least 4 x 4 cells");
  check(chern.grid.meridian_points >= 4, "chern.meridian_points must be >= 4");
  check(chern.grid.theta_margin > 0.0 && chern.grid.theta_margin < 0.5, "chern.theta_margin must be in (0, 0.5)");

  check_positive(concurrence.radii_mhz, "concurrence.radii_mhz");
  check(concurrence.center_over_kappa > 0.0, "concurrence.center_over_kappa must be positive");
  check(concurrence.steps >= 8, "concurrence.steps must be >= 8");
  for (double r : concurrence.e_pi_radii_over_kappa)
    check(r > 0.0 && r < concurrence.center_over_kappa, "concurrence.e_pi_radii_over_kappa must lie inside (0, center)");

  for (double j : drive.j1_targets) check(j > 0.0 && j < 0.58, "drive.j1_targets must lie in (0, 0.58)");
  check_positive(drive.nu_mhz, "drive.nu_mhz");
  check(drive.periods > 0.0, "drive.periods must be positive");
  check(drive.steps_per_modulation >= 20, "drive.steps_per_modulation must be >= 20");
}

PipelineOptions RunConfig::pipeline_options() const {
  PipelineOptions o;
  o.mode = pipeline.mode;
  o.kappa = kappa;
  o.mapping = pipeline.mapping;
  o.mapping.kappa = kappa;
  o.time_points = pipeline.time_points;
  o.shots = pipeline.shots;
  o.workers = workers;
  return o;
}

std::vector<double> RunConfig::e_pi_radii() const {
  std::vector<double> out;
  if (concurrence.e_pi_radii_over_kappa.empty()) {
    for (int k = 1; k < 50; ++k) out.push_back(kappa * k / 100.0);
  } else {
    for (double r : concurrence.e_pi_radii_over_kappa) out.push_back(kappa * r);
  }
  return out;
}

RunConfig parse_config(const json& j) {
  RunConfig c;
  Section top(j, "");
  top.get("kappa", c.kappa);
  top.get("lambda_r", c.lambda_r);
  top.get("seed", c.seed);
  top.get("workers", c.workers);
  top.get("output_dir", c.output_dir);

  if (const json* p = top.child("pipeline")) {
    Section s(*p, "pipeline");
    std::string mode = to_string(c.pipeline.mode);
    s.get("mode", mode);
    c.pipeline.mode = parse_mode(mode);
    s.get("shots", c.pipeline.shots);
    s.get("seeds", c.pipeline.seeds);
    s.get("time_points", c.pipeline.time_points);
    if (const json* m = s.child("mapping")) {
      Section ms(*m, "pipeline.mapping");
      ms.get("t1", c.pipeline.mapping.t1);
      ms.get("t2", c.pipeline.mapping.t2);
      ms.finish();
    }
    s.finish();
  }
  if (const json* p = top.child("berry")) {
    Section s(*p, "berry");
    s.get("radii_over_kappa", c.berry.radii_over_kappa);
    s.get("steps", c.berry.steps);
    s.get("fitted_steps", c.berry.fitted_steps);
    s.finish();
  }
  if (const json* p = top.child("chern")) {
    Section s(*p, "chern");
    s.get("radii_over_kappa", c.chern.radii_over_kappa);
    s.get("curve_radii_mhz", c.chern.curve_radii_mhz);
    s.get("n_theta", c.chern.grid.n_theta);
    s.get("n_phi", c.chern.grid.n_phi);
    s.get("meridian_points", c.chern.grid.meridian_points);
    s.get("theta_margin", c.chern.grid.theta_margin);
    s.finish();
  }
  if (const json* p = top.child("concurrence")) {
    Section s(*p, "concurrence");
    s.get("radii_mhz", c.concurrence.radii_mhz);
    s.get("center_over_kappa", c.concurrence.center_over_kappa);
    s.get("steps", c.concurrence.steps);
    s.get("e_pi_radii_over_kappa", c.concurrence.e_pi_radii_over_kappa);
    s.finish();
  }
  if (const json* p = top.child("drive")) {
    Section s(*p, "drive");
    s.get("j1_targets", c.drive.j1_targets);
    s.get("nu_mhz", c.drive.nu_mhz);
    s.get("periods", c.drive.periods);
    s.get("steps_per_modulation", c.drive.steps_per_modulation);
    s.finish();
  }
  top.finish();
  c.validate();
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config file " + path.string() + " is not valid JSON: " + e.what());
  }
  return parse_config(j);
}

json to_json(const RunConfig& c) {
  return {
      {"kappa", c.kappa},
      {"lambda_r", c.lambda_r},
      {"seed", c.seed},
      {"workers", c.workers},
      {"output_dir", c.output_dir},
      {"pipeline",
       {{"mode", to_string(c.pipeline.mode)},
        {"shots", c.pipeline.shots},
        {"seeds", c.pipeline.seeds},
        {"time_points", c.pipeline.time_points},
        {"mapping", {{"t1", c.pipeline.mapping.t1}, {"t2", c.pipeline.mapping.t2}}}}},
      {"berry",
       {{"radii_over_kappa", c.berry.radii_over_kappa},
        {"steps", c.berry.steps},
        {"fitted_steps", c.berry.fitted_steps}}},
      {"chern",
       {{"radii_over_kappa", c.chern.radii_over_kappa},
        {"curve_radii_mhz", c.chern.curve_radii_mhz},
        {"n_theta", c.chern.grid.n_theta},
        {"n_phi", c.chern.grid.n_phi},
        {"meridian_points", c.chern.grid.meridian_points},
        {"theta_margin", c.chern.grid.theta_margin}}},
      {"concurrence",
       {{"radii_mhz", c.concurrence.radii_mhz},
        {"center_over_kappa", c.concurrence.center_over_kappa},
        {"steps", c.concurrence.steps},
        {"e_pi_radii_over_kappa", c.concurrence.e_pi_radii_over_kappa}}},
      {"drive",
       {{"j1_targets", c.drive.j1_targets},
        {"nu_mhz", c.drive.nu_mhz},
        {"periods", c.drive.periods},
        {"steps_per_modulation", c.drive.steps_per_modulation}}},
  };
}

std::uint64_t config_hash(const RunConfig& c) {
  // Where the files go and how many threads write them do not change results.
  RunConfig canonical = c;
  canonical.output_dir = RunConfig{}.output_dir;
  canonical.workers = 1;
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : to_json(canonical).dump()) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace wer

#include "wer/output.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "wer/units.hpp"

namespace wer {

using nlohmann::json;

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Cell::Cell(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) {
    text = s;
    return;
  }
  text = "\"";
  for (char c : s) {
    if (c == '"') text += '"';
    text += (c == '\n' || c == '\r') ? ' ' : c;
  }
  text += '"';
}

CsvTable::CsvTable(std::vector<std::string> columns) : columns_(std::move(columns)) {
  require(!columns_.empty(), "a CSV table needs columns");
}

void CsvTable::add(std::vector<Cell> row) {
  require(row.size() == columns_.size(), "CSV row has " + std::to_string(row.size()) + " fields, header has " +
                                             std::to_string(columns_.size()));
  std::string line;
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i > 0) line += ',';
    line += row[i].text;
  }
  rows_.push_back(std::move(line));
}

std::string CsvTable::render(const CsvMeta& meta) const {
  std::ostringstream os;
  char hash[17];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(meta.config_hash));
  os << "# wer-csv schema=" << csv_schema_version << " kind=" << meta.kind << " config=" << hash
     << " seed=" << meta.seed << '\n';
  for (std::size_t i = 0; i < columns_.size(); ++i) os << (i > 0 ? "," : "") << columns_[i];
  os << '\n';
  for (const auto& r : rows_) os << r << '\n';
  return os.str();
}

void CsvTable::write(const std::filesystem::path& path, const CsvMeta& meta) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << render(meta);
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

const std::map<std::string, std::vector<std::string>>& csv_columns() {
  static const std::map<std::string, std::vector<std::string>> cols{
      {"fig2b",
       {"radius", "radius_over_kappa", "beta1_over_pi", "beta2_over_pi", "beta1_imag", "beta2_imag", "cycles",
        "swapped", "skipped", "min_fidelity", "median_fidelity", "error"}},
      {"fig3e",
       {"radius", "radius_over_kappa", "c1_meridian", "c2_meridian", "c1_integral", "c2_integral", "fitted_radius",
        "meridian_rms", "max_plaquette_phase", "error"}},
      {"fig3cd", {"source", "radius", "radius_mhz", "theta", "p1", "p2", "p1_model", "p2_model"}},
      {"fig2c", {"radius", "radius_mhz", "center", "mode", "phi", "concurrence"}},
      {"fig2d", {"radius", "radius_over_kappa", "e_pi", "e_pi_closed_form"}},
      {"rabi", {"j1_target", "mu", "nu", "t", "pe_full", "pe_effective"}},
      {"points",
       {"seed_index", "radius", "theta", "lambda_abs", "delta", "lambda_calibrated", "delta_calibrated", "fidelity1",
        "fidelity2", "weight1", "weight2", "residual", "restart", "low_confidence", "unreliable",
        "min_success_probability"}},
  };
  return cols;
}

namespace {

CsvTable table(const char* kind) { return CsvTable(csv_columns().at(kind)); }

const double nan_value = std::nan("");

}  // namespace

CsvTable berry_table(const BerrySweep& sweep, double kappa) {
  CsvTable t = table("fig2b");
  for (const auto& r : sweep.rows) {
    const bool ok = r.error.empty();
    auto v = [&](double x) { return ok ? x : nan_value; };
    t.add({r.radius, r.radius / kappa, v(r.result.beta[0] / pi), v(r.result.beta[1] / pi), v(r.result.beta_imag[0]),
           v(r.result.beta_imag[1]), r.result.cycles, r.result.swapped, r.result.skipped, r.min_fidelity,
           r.median_fidelity, r.error});
  }
  return t;
}

CsvTable chern_table(const ChernSweep& sweep, double kappa) {
  CsvTable t = table("fig3e");
  for (const auto& r : sweep.rows) {
    const bool ok = r.error.empty();
    auto v = [&](double x) { return ok ? x : nan_value; };
    t.add({r.radius, r.radius / kappa, v(r.meridian.chern[0]), v(r.meridian.chern[1]), v(r.integral.chern[0]),
           v(r.integral.chern[1]), v(r.meridian.fitted_radius), v(r.meridian.rms), v(r.integral.max_plaquette_phase),
           r.error});
  }
  return t;
}

CsvTable meridian_table(const std::vector<double>& curve_radii, const ChernSweep& sweep, const ChernGrid& grid,
                        double kappa) {
  CsvTable t = table("fig3cd");
  PipelineOptions analytic;
  analytic.kappa = kappa;
  for (double r : curve_radii) {
    const SphereSpec spec = meridian_spec(r, grid, analytic);
    const MeridianCurve c = meridian_populations(spec, analytic_source(kappa));
    for (std::size_t i = 0; i < c.theta.size(); ++i)
      t.add({"analytic", r, units::to_mhz(r), c.theta[i], c.population[i][0], c.population[i][1],
             c.population[i][0], c.population[i][1]});
  }
  for (const auto& row : sweep.rows) {
    if (row.fits.empty() || !row.error.empty()) continue;
    const MeridianCurve& c = row.meridian.curve;
    for (std::size_t i = 0; i < c.theta.size(); ++i) {
      const auto m = model_populations(row.meridian.fitted_radius, kappa, c.theta[i]);
      const double keep = std::abs(c.population[i][0] - m[0]) + std::abs(c.population[i][1] - m[1]);
      const double swap = std::abs(c.population[i][0] - m[1]) + std::abs(c.population[i][1] - m[0]);
      const bool s = swap < keep;
      t.add({"fitted", row.radius, units::to_mhz(row.radius), c.theta[i], c.population[i][0], c.population[i][1],
             s ? m[1] : m[0], s ? m[0] : m[1]});
    }
  }
  return t;
}

CsvTable concurrence_table(const std::vector<ConcurrenceCurve>& curves, const std::vector<int>& modes) {
  require(curves.size() == modes.size(), "one mode label per concurrence curve");
  CsvTable t = table("fig2c");
  for (std::size_t k = 0; k < curves.size(); ++k) {
    const auto& c = curves[k];
    for (std::size_t i = 0; i < c.phi.size(); ++i)
      t.add({c.radius, units::to_mhz(c.radius), c.center, modes[k] + 1, c.phi[i], c.value[i]});
  }
  return t;
}

CsvTable e_pi_table(const std::vector<double>& radii, const std::vector<double>& values, double center,
                    double kappa) {
  require(radii.size() == values.size(), "E(pi) table needs one value per radius");
  CsvTable t = table("fig2d");
  for (std::size_t i = 0; i < radii.size(); ++i)
    t.add({radii[i], radii[i] / kappa, values[i], e_pi_closed_form(radii[i], center, kappa)});
  return t;
}

CsvTable rabi_table(const std::vector<DriveValidation>& runs) {
  CsvTable t = table("rabi");
  for (const auto& v : runs) {
    const double j1 = bessel_j1(v.mu);
    const auto& times = v.run.times;
    const std::size_t stride = std::max<std::size_t>(1, times.size() / 2000);
    for (std::size_t i = 0; i < times.size(); i += stride) {
      const double c = std::cos(v.predicted_coupling * times[i]);
      t.add({j1, v.mu, v.drive.nu, times[i], v.run.excited_population[i], c * c});
    }
  }
  return t;
}

CsvTable points_table(const std::vector<PointRow>& rows) {
  CsvTable t = table("points");
  for (const auto& row : rows) {
    const PointResult& p = *row.result;
    t.add({row.seed_index, row.radius, row.theta, std::abs(p.truth.lambda), p.truth.delta, p.calibration.lambda_abs,
           p.calibration.delta, p.fidelity[0], p.fidelity[1], p.fit.modal_weight[0], p.fit.modal_weight[1],
           p.fit.residual, p.fit.restart, p.fit.low_confidence, p.unreliable, p.min_success_probability});
  }
  return t;
}

json to_json(const BiorthEigensystem& es) {
  json modes = json::array();
  for (int n = 0; n < 2; ++n) {
    modes.push_back({{"energy", {es.energy[n].real(), es.energy[n].imag()}},
                     {"right", {{es.right[n](0).real(), es.right[n](0).imag()},
                                {es.right[n](1).real(), es.right[n](1).imag()}}},
                     {"left", {{es.left[n](0).real(), es.left[n](0).imag()},
                               {es.left[n](1).real(), es.left[n](1).imag()}}}});
  }
  return modes;
}

json to_json(const FitReport& r) {
  json params = json::array();
  for (int n = 0; n < 2; ++n)
    params.push_back({{"a", r.params.a[n]}, {"b", r.params.b[n]}, {"c", r.params.c[n]}, {"d", r.params.d[n]}});
  return {{"params", params},
          {"residual", r.residual},
          {"iterations", r.iterations},
          {"converged", r.converged},
          {"restart", r.restart},
          {"fidelities", r.fidelities},
          {"low_confidence", r.low_confidence},
          {"modal_weight", r.modal_weight}};
}

json to_json(const std::optional<Transition>& t, const std::string& error) {
  if (!t) return {{"found", false}, {"error", error}};
  return {{"found", true}, {"critical", t->critical}, {"width", t->width}, {"index", t->index}};
}

void write_json(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

}  // namespace wer

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "wer/dynamics.hpp"
#include "wer/entanglement.hpp"
#include "wer/pipeline.hpp"

namespace wer {

inline constexpr int csv_schema_version = 1;

/// Full-precision text for a double (17 significant digits; nan and inf spelled out).
[[nodiscard]] std::string format_double(double x);

/// One CSV field; strings are quoted when they need it.
struct Cell {
  std::string text;

  Cell(double x) : text(format_double(x)) {}
  Cell(int x) : text(std::to_string(x)) {}
  Cell(long x) : text(std::to_string(x)) {}
  Cell(long long x) : text(std::to_string(x)) {}
  Cell(unsigned long x) : text(std::to_string(x)) {}
  Cell(unsigned long long x) : text(std::to_string(x)) {}
  Cell(bool x) : text(x ? "1" : "0") {}
  Cell(const std::string& s);
  Cell(const char* s) : Cell(std::string(s)) {}
};

struct CsvMeta {
  std::string kind;
  std::uint64_t config_hash = 0;
  std::uint64_t seed = 0;
};

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> columns);

  /// Throws Error(invalid_argument) when the field count differs from the header.
  void add(std::vector<Cell> row);
  [[nodiscard]] const std::vector<std::string>& columns() const { return columns_; }
  [[nodiscard]] std::size_t size() const { return rows_.size(); }

  /// "# wer-csv schema=N kind=K config=HASH seed=S", the column row, then data.
  [[nodiscard]] std::string render(const CsvMeta& meta) const;
  void write(const std::filesystem::path& path, const CsvMeta& meta) const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::string> rows_;
};

/// Column lists of every CSV kind, keyed by kind (mirrors schema/csv_columns.json).
[[nodiscard]] const std::map<std::string, std::vector<std::string>>& csv_columns();

[[nodiscard]] CsvTable berry_table(const BerrySweep& sweep, double kappa);
[[nodiscard]] CsvTable chern_table(const ChernSweep& sweep, double kappa);
/// P_e0 along the meridian: analytic curves for `curve_radii` plus any fitted
/// curves carried by the sweep rows.
[[nodiscard]] CsvTable meridian_table(const std::vector<double>& curve_radii, const ChernSweep& sweep,
                                      const ChernGrid& grid, double kappa);
[[nodiscard]] CsvTable concurrence_table(const std::vector<ConcurrenceCurve>& curves, const std::vector<int>& modes);
[[nodiscard]] CsvTable e_pi_table(const std::vector<double>& radii, const std::vector<double>& values, double center,
                                  double kappa);
[[nodiscard]] CsvTable rabi_table(const std::vector<DriveValidation>& runs);

/// Per-point pipeline fits; `seed_index` and `radius` label the sweep row.
struct PointRow {
  int seed_index = 0;
  double radius = 0.0;
  double theta = 0.0;
  const PointResult* result = nullptr;
};
[[nodiscard]] CsvTable points_table(const std::vector<PointRow>& rows);

[[nodiscard]] nlohmann::json to_json(const BiorthEigensystem& es);
[[nodiscard]] nlohmann::json to_json(const FitReport& r);
[[nodiscard]] nlohmann::json to_json(const std::optional<Transition>& t, const std::string& error);

/// Pretty JSON with a trailing newline.
void write_json(const std::filesystem::path& path, const nlohmann::json& j);

}  // namespace wer

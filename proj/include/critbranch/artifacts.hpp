#pragma once

// Figure data and the summary table, plus the CSV / JSON sinks every command
// writes through.

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace critbranch {

enum class NormalizerChoice { HalfLog, LogPower };
const char* to_string(NormalizerChoice c);

struct FigurePreset {
  double nu;
  double a0;
};
/// (0.2, 0.9) and (0.9, 0.2).
std::vector<FigurePreset> figure_presets();
/// 5, 5.5, ..., 100.
std::vector<double> default_figure_grid();

struct FigureRow {
  double t;
  double q;
  double p1;
};
/// q(t) = N(t) / (nu t)^{1/nu} (1 + ln(a0 nu t) / (nu^3 t)) and
/// p1(t) = q(t) (1 / (a0 nu t)) (1 + ln(a0 nu t) / (nu^2 t)).
std::vector<FigureRow> figure_data(double nu, double a0, NormalizerChoice choice, const std::vector<double>& t_grid);

struct ReportRow {
  std::string quantity;
  std::string formula;
  double asymptotic;  // the tabulated expression at the spot point
  double reference;   // solver or closed-form value at the same point, NaN when none applies
};

struct ReportPoint {
  double nu = 0.5;
  double a0 = 1.0;
  double delta = 0.4;
  double c = 0.1;
  double t = 100.0;
  double s = 0.5;
};
std::string describe(const ReportPoint& p);
std::vector<ReportRow> report_table(const ReportPoint& p = {});

/// 17 significant digits.
std::string format_double(double v);
/// RFC-4180 quoting when needed.
std::string csv_field(const std::string& s);

struct Provenance {
  std::string command;
  std::string config_hash;
  std::uint64_t seed = 0;
  std::string version;
};

/// CSV with `#` comment lines for provenance, then a header row.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const Provenance& prov, const std::vector<std::string>& columns);
  CsvWriter& cell(double v);
  CsvWriter& cell(std::uint64_t v);
  CsvWriter& cell(const std::string& v);
  void end_row();
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
  std::ofstream out_;
  bool first_ = true;
};

/// Writes `<csv path>.json` with provenance, wall time and extra fields.
void write_sidecar(const std::string& csv_path, const Provenance& prov, double wall_seconds,
                   const nlohmann::json& extra = nlohmann::json::object());

}  // namespace critbranch

#include "critbranch/artifacts.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "critbranch/asymptotics.hpp"
#include "critbranch/errors.hpp"
#include "critbranch/karamata.hpp"
#include "critbranch/kolmogorov.hpp"
#include "critbranch/laws.hpp"

namespace critbranch {

const char* to_string(NormalizerChoice c) { return c == NormalizerChoice::HalfLog ? "half-log" : "log-power"; }

std::vector<FigurePreset> figure_presets() { return {{0.2, 0.9}, {0.9, 0.2}}; }

std::vector<double> default_figure_grid() {
  std::vector<double> g;
  for (int i = 0; i <= 190; ++i) g.push_back(5.0 + 0.5 * i);
  return g;
}

std::vector<FigureRow> figure_data(double nu, double a0, NormalizerChoice choice, const std::vector<double>& t_grid) {
  if (!(nu > 0.0) || !(a0 > 0.0)) throw DomainError("figure_data: nu and a0 must be positive");
  const NormalizerN N = choice == NormalizerChoice::HalfLog ? NormalizerN::half_log() : NormalizerN::log_power(nu);
  std::vector<FigureRow> rows;
  rows.reserve(t_grid.size());
  for (double t : t_grid) {
    const double q = theorem1_q(nu, a0, N, t);
    rows.push_back({t, q, q * theorem2_predicted(nu, a0, t)});
  }
  return rows;
}

std::string describe(const ReportPoint& p) {
  std::ostringstream os;
  os << "nu=" << p.nu << " a0=" << p.a0 << " delta=" << p.delta << " c=" << p.c << " t=" << p.t << " s=" << p.s;
  return os.str();
}

std::vector<ReportRow> report_table(const ReportPoint& p) {
  const OffspringLaw f = OffspringLaw::canonical(p.nu, p.a0);
  const ImmigrationLaw h = ImmigrationLaw::canonical(p.delta, p.c);
  const NormalizerN N = NormalizerN::fixed_point(f.slowly_varying(), p.nu);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const double nt = p.nu * p.t;
  const double lead = N(p.t) / std::pow(nt, 1.0 / p.nu);

  std::vector<ReportRow> rows;
  {
    const double lam = f.Lambda(1.0 - p.s);
    const double asym = lead * (1.0 + std::log(lam * nt) / (std::pow(p.nu, 3) * p.t));
    rows.push_back({"R(t;s)", "R(t;s) ~ N(t)/(nu t)^(1/nu) * (1 + ln[Lambda(1-s) nu t]/(nu^3 t))", asym,
                    closed_form_F(f, p.t, p.s).R});
  }
  const double q = theorem1_q(p.nu, p.a0, N, p.t);
  rows.push_back({"q(t)", "q(t) ~ N(t)/(nu t)^(1/nu) * (1 + ln(a0 nu t)/(nu^3 t))", q, closed_form_F(f, p.t, 0.0).R});
  rows.push_back({"p1(t)", "p1(t) ~ q(t)/(a0 nu t) * (1 + ln(a0 nu t)/(nu^2 t))", q * theorem2_predicted(p.nu, p.a0, p.t),
                  dF_ds(f, p.t, 0.0)});

  const RegimeParams regime = classify(f, h);
  const SlowRatio ratio = slow_ratio(f, h);
  rows.push_back({"ln U(s)", "ln U(s) = (1-s)^(-|gamma|) + int_{1/(1-s)}^inf (|gamma| - L(u)) u^(|gamma|-1) du",
                  log_U_gf(regime, ratio, p.s), nan});
  rows.push_back({"ln pi(s)", "ln pi(s) = (1-s)^(-|gamma|) L_v(1/(1-s))", log_pi_gf(f, h, p.s),
                  log_U_gf(regime, ratio, p.s) - log_U_gf(regime, ratio, 0.0)});
  rows.push_back({"M(s)", "M(s) = (1/nu)(1/Lambda(1-s) - 1/a0)", M_gf_closed(f, p.s), M_gf(f, p.s)});
  return rows;
}

// ---------------------------------------------------------------------------

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

CsvWriter::CsvWriter(const std::string& path, const Provenance& prov, const std::vector<std::string>& columns)
    : path_(path), out_(path, std::ios::binary) {
  if (!out_) throw Error("cannot open '" + path + "' for writing");
  out_ << "# critbranch " << prov.version << " command=" << prov.command << " config_hash=" << prov.config_hash
       << " seed=" << prov.seed << "\n";
  for (std::size_t i = 0; i < columns.size(); ++i) out_ << (i ? "," : "") << csv_field(columns[i]);
  out_ << "\n";
}

CsvWriter& CsvWriter::cell(double v) { return cell(format_double(v)); }

CsvWriter& CsvWriter::cell(std::uint64_t v) { return cell(std::to_string(v)); }

CsvWriter& CsvWriter::cell(const std::string& v) {
  if (!first_) out_ << ",";
  out_ << csv_field(v);
  first_ = false;
  return *this;
}

void CsvWriter::end_row() {
  out_ << "\n";
  first_ = true;
}

void write_sidecar(const std::string& csv_path, const Provenance& prov, double wall_seconds,
                   const nlohmann::json& extra) {
  nlohmann::json j = {{"file", csv_path},
                      {"command", prov.command},
                      {"config_hash", prov.config_hash},
                      {"seed", prov.seed},
                      {"version", prov.version},
                      {"compiler", __VERSION__},
                      {"wall_seconds", wall_seconds}};
  for (const auto& [k, v] : extra.items()) j[k] = v;
  std::ofstream out(csv_path + ".json");
  if (!out) throw Error("cannot open '" + csv_path + ".json' for writing");
  out << j.dump(2) << "\n";
}

}  // namespace critbranch

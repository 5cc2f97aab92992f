// critbranch: command-line driver.
//
//   critbranch <simulate|solve|invariant|verify|figure-data|report> [--config PATH] [--out DIR]
//              [--seed U64] [--threads N]

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <limits>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <omp.h>

#include "critbranch/artifacts.hpp"
#include "critbranch/asymptotics.hpp"
#include "critbranch/config.hpp"
#include "critbranch/errors.hpp"
#include "critbranch/kolmogorov.hpp"
#include "critbranch/laws.hpp"
#include "critbranch/montecarlo.hpp"
#include "critbranch/verify.hpp"

namespace fs = std::filesystem;
using namespace critbranch;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Options {
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
};

ExperimentConfig resolve(const std::string& command, const Options& opt) {
  ExperimentConfig cfg = opt.config_path.empty() ? parse_config(nlohmann::json::object()) : load_config(opt.config_path);
  if (!cfg.command.empty() && cfg.command != command) {
    throw SchemaError("/command", "config is for '" + cfg.command + "', not '" + command + "'");
  }
  cfg.command = command;
  if (opt.seed) cfg.seed = *opt.seed;
  if (opt.threads) {
    cfg.threads = *opt.threads;
  } else if (const char* env = std::getenv("CRITICALBRANCH_THREADS")) {
    cfg.threads = std::atoi(env);
  }
  if (!opt.out_dir.empty()) cfg.out_dir = opt.out_dir;
  refresh_resolved(cfg);
  if (cfg.threads > 0) omp_set_num_threads(cfg.threads);
  fs::create_directories(cfg.out_dir);
  return cfg;
}

Provenance provenance(const ExperimentConfig& cfg) { return {cfg.command, config_hash(cfg), cfg.seed, CRITBRANCH_VERSION}; }

std::string out_path(const ExperimentConfig& cfg, const std::string& name) { return (fs::path(cfg.out_dir) / name).string(); }

const OffspringSpec& need_offspring(const ExperimentConfig& cfg) {
  if (!cfg.offspring) throw SchemaError("/offspring", "required field is missing");
  return *cfg.offspring;
}

void check_regime(const ExperimentConfig& cfg, const OffspringLaw& f, const ImmigrationLaw& h) {
  if (!cfg.regime) return;
  const char* got = to_string(classify(f, h).classification);
  if (*cfg.regime != got) throw SchemaError("/regime", std::string("laws classify as ") + got);
}

using Clock = std::chrono::steady_clock;
double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

int cmd_simulate(const ExperimentConfig& cfg) {
  const auto t0 = Clock::now();
  const OffspringLaw f = make_offspring(need_offspring(cfg));
  SimConfig sc;
  sc.grid = cfg.t_grid.empty() ? std::vector<double>{0.0} : cfg.t_grid;
  sc.replicas = cfg.simulation.replicas;
  sc.seed = cfg.seed;
  sc.cap = cfg.simulation.cap;
  sc.initial = cfg.simulation.initial;
  sc.threads = cfg.threads;
  SimResult res;
  if (cfg.simulation.immigration) {
    if (!cfg.immigration) throw SchemaError("/immigration", "required when simulation.immigration is true");
    const ImmigrationLaw h = make_immigration(*cfg.immigration);
    check_regime(cfg, f, h);
    res = simulate_mbis(f, h, sc);
  } else {
    res = simulate_mbs(f, sc);
  }
  std::vector<QuantitySpec> est = cfg.simulation.estimators;
  if (est.empty()) {
    for (double t : sc.grid) est.push_back({Quantity::Survival, t, 0});
  }
  const std::string path = out_path(cfg, "simulate.csv");
  CsvWriter csv(path, provenance(cfg), {"quantity", "t", "j", "value", "se", "replicas", "capped"});
  for (const auto& q : est) {
    Estimate e;
    try {
      e = estimate(q, res);
    } catch (const InsufficientEventsError& err) {
      std::cerr << "warning: " << err.what() << "\n";
      e.value = e.se = kNaN;
    }
    csv.cell(std::string(to_string(q.kind))).cell(q.t).cell(q.j).cell(e.value).cell(e.se);
    csv.cell(static_cast<std::uint64_t>(e.replicas)).cell(static_cast<std::uint64_t>(e.capped)).end_row();
  }
  write_sidecar(path, provenance(cfg), since(t0),
                {{"replicas", res.replicas}, {"capped_paths", res.capped_count}, {"events", res.events}});
  std::cout << "wrote " << path << " (" << res.replicas << " replicas, " << res.capped_count << " capped)\n";
  return 0;
}

int cmd_solve(const ExperimentConfig& cfg) {
  const auto t0 = Clock::now();
  const OffspringLaw f = make_offspring(need_offspring(cfg));
  const std::vector<double> ts = cfg.t_grid.empty() ? std::vector<double>{1.0} : cfg.t_grid;
  const std::vector<double> ss = cfg.s_grid.empty() ? std::vector<double>{0.0} : cfg.s_grid;
  std::optional<ImmigrationLaw> h;
  if (cfg.immigration) {
    h = make_immigration(*cfg.immigration);
    check_regime(cfg, f, *h);
  }
  const std::string path = out_path(cfg, "solve.csv");
  CsvWriter csv(path, provenance(cfg), {"t", "s", "F", "R", "dFds", "G", "log_P0"});
  for (double s : ss) {
    for (double t : ts) {
      const TransitionSolution sol = h ? mbis_P(f, *h, 0, t, s, cfg.tolerance) : solve_F(f, t, s, cfg.tolerance);
      const double dF = h ? dF_ds(f, t, s, cfg.tolerance) : sol.dFds.value_or(kNaN);
      csv.cell(t).cell(s).cell(sol.F).cell(sol.R).cell(dF).cell(sol.G.value_or(kNaN)).cell(sol.log_P.value_or(kNaN));
      csv.end_row();
    }
  }
  write_sidecar(path, provenance(cfg), since(t0));
  std::cout << "wrote " << path << "\n";
  return 0;
}

int cmd_invariant(const ExperimentConfig& cfg) {
  const auto t0 = Clock::now();
  const OffspringLaw f = make_offspring(need_offspring(cfg));
  const std::size_t N = cfg.series_order;
  const InvariantMeasure M = M_series(f, N);
  const InvariantMeasure V = V_series(f, N);
  std::optional<InvariantMeasure> U;
  std::optional<InvariantMeasure> pi;
  if (cfg.immigration) {
    const ImmigrationLaw h = make_immigration(*cfg.immigration);
    check_regime(cfg, f, h);
    pi = pi_series(f, h, N);
    try {
      U = U_series(classify(f, h), slow_ratio(f, h), N);
    } catch (const EligibilityError& e) {
      std::cerr << "note: U not available: " << e.what() << "\n";
    }
  }
  const std::string path = out_path(cfg, "invariant.csv");
  CsvWriter csv(path, provenance(cfg), {"j", "mu", "v", "u", "pi"});
  for (std::size_t j = 0; j <= N; ++j) {
    csv.cell(static_cast<std::uint64_t>(j)).cell(M.coeffs[j]).cell(V.coeffs[j]);
    csv.cell(U ? U->coeffs[j] : kNaN).cell(pi ? pi->coeffs[j] : kNaN).end_row();
  }
  write_sidecar(path, provenance(cfg), since(t0), {{"series_order", N}});
  std::cout << "wrote " << path << "\n";
  return 0;
}

int cmd_verify(const ExperimentConfig& cfg) {
  const auto t0 = Clock::now();
  VerifyOptions vo;
  vo.threads = cfg.threads;
  if (cfg.seed != 0) vo.seed = cfg.seed;
  const std::string path = out_path(cfg, "verify.csv");
  CsvWriter csv(path, provenance(cfg), {"criterion", "status", "measured", "threshold", "seconds", "detail"});
  int failed = 0;
  for (const auto& c : acceptance_criteria()) {
    const CriterionResult r = run_criterion(c, vo);
    std::cout << format_result(r) << std::endl;
    csv.cell(r.id).cell(std::string(r.passed ? "pass" : "fail")).cell(r.measured).cell(r.threshold).cell(r.seconds);
    csv.cell(r.detail).end_row();
    if (!r.passed) ++failed;
  }
  write_sidecar(path, provenance(cfg), since(t0), {{"failed", failed}, {"verify_seed", vo.seed}});
  std::cout << (failed ? std::to_string(failed) + " criteria failed" : std::string("all criteria pass")) << "\n";
  return failed ? 1 : 0;
}

int cmd_figure_data(const ExperimentConfig& cfg) {
  const auto t0 = Clock::now();
  std::vector<FigurePreset> params = figure_presets();
  if (cfg.figure.nu) params = {{*cfg.figure.nu, *cfg.figure.a0}};
  std::vector<NormalizerChoice> choices{NormalizerChoice::HalfLog, NormalizerChoice::LogPower};
  if (cfg.figure.normalizer == "half-log") choices = {NormalizerChoice::HalfLog};
  if (cfg.figure.normalizer == "log-power") choices = {NormalizerChoice::LogPower};
  const std::vector<double> grid = cfg.t_grid.empty() ? default_figure_grid() : cfg.t_grid;

  const std::string path = out_path(cfg, "figure_data.csv");
  CsvWriter csv(path, provenance(cfg), {"nu", "a0", "normalizer", "t", "q", "p1"});
  for (const auto& p : params) {
    for (auto choice : choices) {
      for (const auto& row : figure_data(p.nu, p.a0, choice, grid)) {
        csv.cell(p.nu).cell(p.a0).cell(std::string(to_string(choice))).cell(row.t).cell(row.q).cell(row.p1).end_row();
      }
    }
  }
  write_sidecar(path, provenance(cfg), since(t0));
  std::cout << "wrote " << path << "\n";
  return 0;
}

int cmd_report(const ExperimentConfig& cfg) {
  const auto t0 = Clock::now();
  const ReportPoint point;
  const auto rows = report_table(point);
  const std::string path = out_path(cfg, "report.csv");
  CsvWriter csv(path, provenance(cfg), {"quantity", "formula", "asymptotic", "reference"});
  std::cout << "spot point: " << describe(point) << "\n";
  for (const auto& r : rows) {
    csv.cell(r.quantity).cell(r.formula).cell(r.asymptotic).cell(r.reference).end_row();
    std::cout << "  " << r.quantity << "\t" << r.formula << "\n\t= " << format_double(r.asymptotic);
    if (!std::isnan(r.reference)) std::cout << "  (reference " << format_double(r.reference) << ")";
    std::cout << "\n";
  }
  write_sidecar(path, provenance(cfg), since(t0), {{"spot_point", describe(point)}});
  std::cout << "wrote " << path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Critical Markov branching systems: solvers, limit checks and simulation"};
  app.set_version_flag("--version", std::string(CRITBRANCH_VERSION));
  app.require_subcommand(1);
  Options opt;

  struct Sub {
    const char* name;
    const char* help;
    int (*run)(const ExperimentConfig&);
  };
  const Sub subs[] = {
      {"simulate", "Gillespie simulation and estimators", cmd_simulate},
      {"solve", "transition generating functions on a (t, s) grid", cmd_solve},
      {"invariant", "invariant measure coefficients", cmd_invariant},
      {"verify", "run the acceptance suite", cmd_verify},
      {"figure-data", "survival and local probability curves", cmd_figure_data},
      {"report", "the summary table with spot values", cmd_report},
  };
  for (const auto& s : subs) {
    CLI::App* sc = app.add_subcommand(s.name, s.help);
    sc->add_option("--config", opt.config_path, "JSON config file")->check(CLI::ExistingFile);
    sc->add_option("--out", opt.out_dir, "output directory");
    sc->add_option_function<std::uint64_t>("--seed", [&](const std::uint64_t& v) { opt.seed = v; }, "random seed");
    sc->add_option_function<int>("--threads", [&](const int& v) { opt.threads = v; }, "threads, 0 = auto")
        ->check(CLI::NonNegativeNumber);
  }
  CLI11_PARSE(app, argc, argv);

  for (const auto& s : subs) {
    if (!app.got_subcommand(s.name)) continue;
    try {
      return s.run(resolve(s.name, opt));
    } catch (const SchemaError& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 2;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 3;
    }
  }
  return 0;
}

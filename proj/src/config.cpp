#include "critbranch/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "critbranch/errors.hpp"

namespace critbranch {

using nlohmann::json;

namespace {

const char* type_name(const json& v) { return v.type_name(); }

// Reads fields of one JSON object, remembering which keys were consumed.
class ObjectReader {
 public:
  ObjectReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw SchemaError(where(), std::string("expected an object, got ") + type_name(j_));
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  std::string child(const std::string& key) const { return path_ + "/" + key; }

  const json& raw(const std::string& key) {
    seen_.insert(key);
    return j_.at(key);
  }

  double number(const std::string& key) {
    if (!has(key)) throw SchemaError(child(key), "required field is missing");
    const json& v = raw(key);
    if (!v.is_number()) throw SchemaError(child(key), std::string("expected a number, got ") + type_name(v));
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw SchemaError(child(key), "must be finite");
    return d;
  }

  double number(const std::string& key, double fallback) { return has(key) ? number(key) : fallback; }

  std::uint64_t unsigned_int(const std::string& key, std::uint64_t fallback) {
    if (!has(key)) return fallback;
    const json& v = raw(key);
    if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<long long>() < 0)) {
      throw SchemaError(child(key), "expected a non-negative integer");
    }
    return v.get<std::uint64_t>();
  }

  std::string string(const std::string& key, const std::string& fallback) {
    if (!has(key)) return fallback;
    const json& v = raw(key);
    if (!v.is_string()) throw SchemaError(child(key), std::string("expected a string, got ") + type_name(v));
    return v.get<std::string>();
  }

  bool boolean(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    const json& v = raw(key);
    if (!v.is_boolean()) throw SchemaError(child(key), std::string("expected a boolean, got ") + type_name(v));
    return v.get<bool>();
  }

  std::vector<double> numbers(const std::string& key) {
    if (!has(key)) return {};
    const json& v = raw(key);
    if (!v.is_array()) throw SchemaError(child(key), std::string("expected an array, got ") + type_name(v));
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number()) throw SchemaError(child(key) + "/" + std::to_string(i), "expected a number");
      out.push_back(v[i].get<double>());
    }
    return out;
  }

  std::vector<std::size_t> indices(const std::string& key) {
    if (!has(key)) return {};
    const json& v = raw(key);
    if (!v.is_array()) throw SchemaError(child(key), std::string("expected an array, got ") + type_name(v));
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number_unsigned()) {
        throw SchemaError(child(key) + "/" + std::to_string(i), "expected a non-negative integer");
      }
      out.push_back(v[i].get<std::size_t>());
    }
    return out;
  }

  void finish() const {
    for (const auto& [key, value] : j_.items()) {
      if (!seen_.count(key)) throw SchemaError(child(key), "unknown key");
    }
  }

 private:
  std::string where() const { return path_.empty() ? "/" : path_; }

  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

void require_sorted(const std::vector<double>& v, const std::string& path) {
  if (!std::is_sorted(v.begin(), v.end())) throw SchemaError(path, "grid must be sorted");
}

OffspringSpec parse_offspring(const json& j, const std::string& path) {
  ObjectReader r(j, path);
  OffspringSpec s;
  s.kind = r.string("kind", "");
  if (s.kind.empty()) throw SchemaError(r.child("kind"), "required field is missing");
  if (s.kind == "canonical") {
    s.nu = r.number("nu");
    s.a0 = r.number("a0");
  } else if (s.kind == "perturbed") {
    s.nu = r.number("nu");
    if (r.has("L")) {
      ObjectReader L(r.raw("L"), r.child("L"));
      const std::string form = L.string("form", "power");
      if (form != "power") throw SchemaError(L.child("form"), "perturbed offspring needs form \"power\"");
      s.c = L.number("c");
      s.rho = L.number("rho");
      s.p = L.number("p");
      L.finish();
    } else {
      s.c = r.number("c");
      s.rho = r.number("rho");
      s.p = r.number("p");
    }
    s.a0 = s.c * (1.0 + s.rho);
  } else if (s.kind == "finite" || s.kind == "tabulated") {
    s.rates = r.numbers("rates");
    if (s.rates.empty()) throw SchemaError(r.child("rates"), "required field is missing");
  } else {
    throw SchemaError(r.child("kind"), "unknown offspring kind '" + s.kind + "'");
  }
  r.finish();
  return s;
}

ImmigrationSpec parse_immigration(const json& j, const std::string& path) {
  ObjectReader r(j, path);
  ImmigrationSpec s;
  s.kind = r.string("kind", "");
  if (s.kind.empty()) throw SchemaError(r.child("kind"), "required field is missing");
  if (s.kind == "canonical" || s.kind == "perturbed") {
    s.delta = r.number("delta");
    s.c = r.number("c");
    s.kappa = s.kind == "perturbed" ? r.number("kappa") : 0.0;
  } else if (s.kind == "finite" || s.kind == "tabulated") {
    s.rates = r.numbers("rates");
    if (s.rates.empty()) throw SchemaError(r.child("rates"), "required field is missing");
  } else {
    throw SchemaError(r.child("kind"), "unknown immigration kind '" + s.kind + "'");
  }
  r.finish();
  return s;
}

QuantitySpec parse_estimator(const json& j, const std::string& path) {
  ObjectReader r(j, path);
  QuantitySpec q;
  const std::string kind = r.string("quantity", "");
  if (kind == "survival") {
    q.kind = Quantity::Survival;
  } else if (kind == "p") {
    q.kind = Quantity::Probability;
  } else if (kind == "mean") {
    q.kind = Quantity::Mean;
  } else if (kind == "ratio") {
    q.kind = Quantity::Ratio;
  } else {
    throw SchemaError(r.child("quantity"), "expected one of survival, p, mean, ratio");
  }
  q.t = r.number("t");
  if (q.t < 0.0) throw SchemaError(r.child("t"), "must be non-negative");
  q.j = r.unsigned_int("j", 0);
  r.finish();
  return q;
}

json offspring_json(const OffspringSpec& s) {
  if (s.kind == "canonical") return {{"kind", s.kind}, {"nu", s.nu}, {"a0", s.a0}};
  if (s.kind == "perturbed") return {{"kind", s.kind}, {"nu", s.nu}, {"c", s.c}, {"rho", s.rho}, {"p", s.p}};
  return {{"kind", s.kind}, {"rates", s.rates}};
}

json immigration_json(const ImmigrationSpec& s) {
  if (s.kind == "canonical") return {{"kind", s.kind}, {"delta", s.delta}, {"c", s.c}};
  if (s.kind == "perturbed") return {{"kind", s.kind}, {"delta", s.delta}, {"c", s.c}, {"kappa", s.kappa}};
  return {{"kind", s.kind}, {"rates", s.rates}};
}

}  // namespace

void refresh_resolved(ExperimentConfig& cfg) {
  json out;
  out["command"] = cfg.command;
  if (cfg.offspring) out["offspring"] = offspring_json(*cfg.offspring);
  if (cfg.immigration) out["immigration"] = immigration_json(*cfg.immigration);
  if (cfg.regime) out["regime"] = *cfg.regime;
  out["grids"] = {{"t", cfg.t_grid}, {"s", cfg.s_grid}, {"n", cfg.n_grid}, {"j", cfg.j_grid}};
  out["tolerances"] = {{"rtol", cfg.tolerance.rtol}, {"atol", cfg.tolerance.atol}};
  out["series_order"] = cfg.series_order;
  out["seed"] = cfg.seed;
  out["threads"] = cfg.threads;
  json est = json::array();
  for (const auto& q : cfg.simulation.estimators) {
    est.push_back({{"quantity", to_string(q.kind)}, {"t", q.t}, {"j", q.j}});
  }
  out["simulation"] = {{"replicas", cfg.simulation.replicas},
                       {"cap", cfg.simulation.cap},
                       {"initial", cfg.simulation.initial},
                       {"immigration", cfg.simulation.immigration},
                       {"estimators", est}};
  json fig = {{"normalizer", cfg.figure.normalizer}};
  if (cfg.figure.nu) fig["nu"] = *cfg.figure.nu;
  if (cfg.figure.a0) fig["a0"] = *cfg.figure.a0;
  out["figure"] = fig;
  out["output"] = {{"dir", cfg.out_dir}};
  cfg.resolved = std::move(out);
}

ExperimentConfig parse_config(const json& j) {
  ObjectReader r(j, "");
  ExperimentConfig cfg;
  cfg.command = r.string("command", "");
  if (r.has("offspring")) cfg.offspring = parse_offspring(r.raw("offspring"), "/offspring");
  if (r.has("immigration")) cfg.immigration = parse_immigration(r.raw("immigration"), "/immigration");
  if (r.has("regime")) {
    cfg.regime = r.string("regime", "");
    if (*cfg.regime != "transient" && *cfg.regime != "positive-recurrent" && *cfg.regime != "q-process") {
      throw SchemaError("/regime", "expected transient, positive-recurrent or q-process");
    }
  }
  if (r.has("grids")) {
    ObjectReader g(r.raw("grids"), "/grids");
    cfg.t_grid = g.numbers("t");
    cfg.s_grid = g.numbers("s");
    cfg.n_grid = g.indices("n");
    cfg.j_grid = g.indices("j");
    g.finish();
    require_sorted(cfg.t_grid, "/grids/t");
    for (std::size_t i = 0; i < cfg.t_grid.size(); ++i) {
      if (cfg.t_grid[i] < 0.0) throw SchemaError("/grids/t/" + std::to_string(i), "must be non-negative");
    }
    for (std::size_t i = 0; i < cfg.s_grid.size(); ++i) {
      if (!(cfg.s_grid[i] >= 0.0 && cfg.s_grid[i] <= 1.0)) {
        throw SchemaError("/grids/s/" + std::to_string(i), "must lie in [0, 1]");
      }
    }
  }
  if (r.has("tolerances")) {
    ObjectReader t(r.raw("tolerances"), "/tolerances");
    cfg.tolerance.rtol = t.number("rtol", cfg.tolerance.rtol);
    cfg.tolerance.atol = t.number("atol", cfg.tolerance.atol);
    t.finish();
    if (!(cfg.tolerance.rtol > 0.0)) throw SchemaError("/tolerances/rtol", "must be positive");
    if (!(cfg.tolerance.atol > 0.0)) throw SchemaError("/tolerances/atol", "must be positive");
  }
  cfg.series_order = r.unsigned_int("series_order", cfg.series_order);
  if (cfg.series_order < 1) throw SchemaError("/series_order", "must be at least 1");
  cfg.seed = r.unsigned_int("seed", cfg.seed);
  cfg.threads = static_cast<int>(r.unsigned_int("threads", 0));
  if (r.has("simulation")) {
    ObjectReader s(r.raw("simulation"), "/simulation");
    cfg.simulation.replicas = s.unsigned_int("replicas", cfg.simulation.replicas);
    cfg.simulation.cap = s.unsigned_int("cap", cfg.simulation.cap);
    cfg.simulation.immigration = s.boolean("immigration", cfg.immigration.has_value());
    cfg.simulation.initial = s.unsigned_int("initial", cfg.simulation.immigration ? 0 : 1);
    if (s.has("estimators")) {
      const json& e = s.raw("estimators");
      if (!e.is_array()) throw SchemaError("/simulation/estimators", "expected an array");
      for (std::size_t i = 0; i < e.size(); ++i) {
        cfg.simulation.estimators.push_back(parse_estimator(e[i], "/simulation/estimators/" + std::to_string(i)));
      }
    }
    s.finish();
    if (cfg.simulation.replicas < 1) throw SchemaError("/simulation/replicas", "must be at least 1");
    if (cfg.simulation.cap < 1) throw SchemaError("/simulation/cap", "must be at least 1");
  } else {
    cfg.simulation.immigration = cfg.immigration.has_value();
    cfg.simulation.initial = cfg.simulation.immigration ? 0 : 1;
  }
  if (r.has("figure")) {
    ObjectReader f(r.raw("figure"), "/figure");
    if (f.has("nu")) cfg.figure.nu = f.number("nu");
    if (f.has("a0")) cfg.figure.a0 = f.number("a0");
    cfg.figure.normalizer = f.string("normalizer", cfg.figure.normalizer);
    f.finish();
    if (cfg.figure.nu.has_value() != cfg.figure.a0.has_value()) {
      throw SchemaError(cfg.figure.nu ? "/figure/a0" : "/figure/nu", "nu and a0 must be given together");
    }
    if (cfg.figure.nu && !(*cfg.figure.nu > 0.0)) throw SchemaError("/figure/nu", "must be positive");
    if (cfg.figure.a0 && !(*cfg.figure.a0 > 0.0)) throw SchemaError("/figure/a0", "must be positive");
    const auto& n = cfg.figure.normalizer;
    if (n != "half-log" && n != "log-power" && n != "both") {
      throw SchemaError("/figure/normalizer", "expected half-log, log-power or both");
    }
  }
  if (r.has("output")) {
    ObjectReader o(r.raw("output"), "/output");
    cfg.out_dir = o.string("dir", cfg.out_dir);
    o.finish();
  }
  r.finish();

  // Law construction errors are reported against the law's path.
  try {
    if (cfg.offspring) (void)make_offspring(*cfg.offspring);
  } catch (const SchemaError&) {
    throw;
  } catch (const Error& e) {
    throw SchemaError("/offspring", e.what());
  }
  try {
    if (cfg.immigration) (void)make_immigration(*cfg.immigration);
  } catch (const SchemaError&) {
    throw;
  } catch (const Error& e) {
    throw SchemaError("/immigration", e.what());
  }

  refresh_resolved(cfg);
  return cfg;
}

ExperimentConfig parse_config_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError("/", std::string("malformed JSON at byte ") + std::to_string(e.byte) + ": " + e.what());
  }
  return parse_config(j);
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("/", "cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

OffspringLaw make_offspring(const OffspringSpec& s) {
  if (s.kind == "canonical") return OffspringLaw::canonical(s.nu, s.a0);
  if (s.kind == "perturbed") return OffspringLaw::perturbed(s.nu, s.c, s.rho, s.p);
  if (s.kind == "finite") return OffspringLaw::finite(s.rates);
  if (s.kind == "tabulated") return OffspringLaw::tabulated(s.rates);
  throw SchemaError("/offspring/kind", "unknown offspring kind '" + s.kind + "'");
}

ImmigrationLaw make_immigration(const ImmigrationSpec& s) {
  if (s.kind == "canonical") return ImmigrationLaw::canonical(s.delta, s.c);
  if (s.kind == "perturbed") return ImmigrationLaw::perturbed(s.delta, s.c, s.kappa);
  if (s.kind == "finite") return ImmigrationLaw::finite(s.rates);
  if (s.kind == "tabulated") return ImmigrationLaw::tabulated(s.rates);
  throw SchemaError("/immigration/kind", "unknown immigration kind '" + s.kind + "'");
}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string config_hash(const ExperimentConfig& cfg) { return fnv1a_hex(cfg.resolved.dump()); }

}  // namespace critbranch

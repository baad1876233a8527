#include "kslab/config.hpp"

#include "kslab/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace kslab {

TorusGrid ExperimentConfig::torus_grid() const { return make_torus_grid(dim, points, length); }

RadialGrid ExperimentConfig::radial_grid() const {
  return make_radial_grid(dim, nodes, tau_max);
}

KSParams ExperimentConfig::ks_params() const {
  KSParams p;
  p.chi = chi;
  p.kappa = kappa;
  p.gamma = gamma;
  p.dim = dim;
  p.domain = kind;
  validate(p);
  return p;
}

ForcingSpec ExperimentConfig::forcing_spec() const {
  ForcingSpec f;
  f.period = period;
  f.amplitude = amplitude;
  f.phase = phase;
  f.axis = axis;
  f.width = width;
  validate(f);
  return f;
}

SolveOptions ExperimentConfig::solve_options() const {
  SolveOptions o;
  o.dt = dt;
  o.scheme = scheme;
  o.snapshot_stride = snapshot_stride;
  o.forcing_window_rate = window_rate;
  o.quad_cells = quad_cells;
  return o;
}

PeriodicOptions ExperimentConfig::periodic_options() const {
  PeriodicOptions o;
  const double steps = period / dt;
  o.steps_per_period = static_cast<int>(std::lround(steps));
  if (o.steps_per_period < 2 || std::abs(steps - o.steps_per_period) > 1e-9)
    throw ConfigError("config: forcing period must be an integer multiple of solver dt");
  o.scheme = scheme;
  o.tol_cesaro = tol_inner;
  o.max_cesaro = max_cesaro;
  o.tol_outer = tol_outer;
  o.max_outer = max_outer;
  o.rho = rho;
  o.plain_fixed_point = plain_fixed_point;
  return o;
}

namespace {

struct Setter {
  std::function<void(ExperimentConfig&, const std::string&)> apply;
};

double parse_double(const std::string& v, const std::string& key) {
  try {
    std::size_t used = 0;
    const double x = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("config: key '" + key + "' expects a number, got '" + v + "'");
  }
}

long parse_long(const std::string& v, const std::string& key) {
  try {
    std::size_t used = 0;
    const long x = std::stol(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("config: key '" + key + "' expects an integer, got '" + v + "'");
  }
}

bool parse_bool(const std::string& v, const std::string& key) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("config: key '" + key + "' expects a boolean, got '" + v + "'");
}

const std::map<std::string, Setter>& schema() {
  static const std::map<std::string, Setter> s = [] {
    std::map<std::string, Setter> m;
    auto num = [&m](const std::string& key, double ExperimentConfig::*field) {
      m[key] = {[key, field](ExperimentConfig& c, const std::string& v) {
        c.*field = parse_double(v, key);
      }};
    };
    auto integer = [&m](const std::string& key, int ExperimentConfig::*field) {
      m[key] = {[key, field](ExperimentConfig& c, const std::string& v) {
        c.*field = static_cast<int>(parse_long(v, key));
      }};
    };
    auto text = [&m](const std::string& key, std::string ExperimentConfig::*field) {
      m[key] = {[field](ExperimentConfig& c, const std::string& v) { c.*field = v; }};
    };

    m["domain.kind"] = {[](ExperimentConfig& c, const std::string& v) {
      if (v == "torus")
        c.kind = DomainKind::torus;
      else if (v == "hyperbolic-radial")
        c.kind = DomainKind::hyperbolic_radial;
      else
        throw ConfigError("config: domain.kind must be 'torus' or 'hyperbolic-radial', got '" +
                          v + "'");
    }};
    integer("domain.n", &ExperimentConfig::dim);
    integer("domain.N", &ExperimentConfig::points);
    num("domain.L", &ExperimentConfig::length);
    integer("domain.M", &ExperimentConfig::nodes);
    num("domain.tau_max", &ExperimentConfig::tau_max);

    num("params.chi", &ExperimentConfig::chi);
    num("params.kappa", &ExperimentConfig::kappa);
    num("params.gamma", &ExperimentConfig::gamma);
    num("params.delta_n", &ExperimentConfig::delta_n);
    num("params.norm_p", &ExperimentConfig::norm_p);

    num("forcing.T", &ExperimentConfig::period);
    num("forcing.A", &ExperimentConfig::amplitude);
    num("forcing.phase", &ExperimentConfig::phase);
    integer("forcing.axis", &ExperimentConfig::axis);
    num("forcing.width", &ExperimentConfig::width);
    num("forcing.window_rate", &ExperimentConfig::window_rate);

    num("solver.dt", &ExperimentConfig::dt);
    m["solver.scheme"] = {[](ExperimentConfig& c, const std::string& v) {
      if (v == "etd1")
        c.scheme = Scheme::etd1;
      else if (v == "etd2rk")
        c.scheme = Scheme::etd2rk;
      else
        throw ConfigError("config: solver.scheme must be 'etd1' or 'etd2rk', got '" + v + "'");
    }};
    num("solver.tol_outer", &ExperimentConfig::tol_outer);
    num("solver.tol_inner", &ExperimentConfig::tol_inner);
    num("solver.rho", &ExperimentConfig::rho);
    integer("solver.max_outer", &ExperimentConfig::max_outer);
    m["solver.max_cesaro"] = {[](ExperimentConfig& c, const std::string& v) {
      c.max_cesaro = parse_long(v, "solver.max_cesaro");
    }};
    integer("solver.snapshot_stride", &ExperimentConfig::snapshot_stride);
    integer("solver.quad_cells", &ExperimentConfig::quad_cells);
    m["solver.plain_fixed_point"] = {[](ExperimentConfig& c, const std::string& v) {
      c.plain_fixed_point = parse_bool(v, "solver.plain_fixed_point");
    }};

    text("experiment.name", &ExperimentConfig::name);
    num("experiment.horizon", &ExperimentConfig::horizon);
    num("experiment.fit_lo", &ExperimentConfig::fit_lo);
    num("experiment.fit_hi", &ExperimentConfig::fit_hi);
    m["experiment.seed"] = {[](ExperimentConfig& c, const std::string& v) {
      c.seed = static_cast<unsigned long>(parse_long(v, "experiment.seed"));
    }};
    num("experiment.perturbation", &ExperimentConfig::perturbation);
    integer("experiment.periods", &ExperimentConfig::periods);
    num("experiment.r", &ExperimentConfig::stability_r);
    text("experiment.input", &ExperimentConfig::input);
    text("experiment.fit_kind", &ExperimentConfig::fit_kind);
    text("experiment.sigma_p_values", &ExperimentConfig::sigma_p_values);
    return m;
  }();
  return s;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

void validate_ranges(const ExperimentConfig& c) {
  try {
    if (c.kind == DomainKind::torus) {
      make_torus_grid(c.dim, c.points, c.length);  // range checks
    } else {
      make_radial_grid(c.dim, c.nodes, c.tau_max);
      if (!(c.norm_p > c.dim && c.norm_p < 2.0 * c.dim))
        throw std::domain_error("params.norm_p must lie in (n, 2n)");
    }
  } catch (const std::domain_error& err) {
    throw ConfigError(std::string("config: ") + err.what());
  }
  if (!(c.dt > 0.0)) throw ConfigError("config: solver.dt must be positive");
  if (!(c.period > 0.0)) throw ConfigError("config: forcing.T must be positive");
  if (c.kappa < 0.0) throw ConfigError("config: params.kappa must be >= 0");
  if (c.gamma < 0.0) throw ConfigError("config: params.gamma must be >= 0");
  if (c.snapshot_stride < 1) throw ConfigError("config: solver.snapshot_stride must be >= 1");
  if (c.quad_cells < 4) throw ConfigError("config: solver.quad_cells must be >= 4");
  if (c.periods < 1) throw ConfigError("config: experiment.periods must be >= 1");
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
  ExperimentConfig cfg;
  std::istringstream is(text);
  std::string line;
  std::string section;
  int lineno = 0;
  static const char* known_sections[] = {"domain", "params", "forcing", "solver", "experiment"};
  while (std::getline(is, line)) {
    ++lineno;
    const auto comment = line.find('#');
    if (comment != std::string::npos) line = line.substr(0, comment);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("config: malformed section header at line " + std::to_string(lineno));
      section = trim(line.substr(1, line.size() - 2));
      bool ok = false;
      for (const char* s : known_sections) ok = ok || section == s;
      if (!ok) throw ConfigError("config: unknown section '" + section + "' at line " +
                                 std::to_string(lineno));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config: expected 'key = value' at line " + std::to_string(lineno));
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (section.empty())
      throw ConfigError("config: key '" + key + "' outside any section at line " +
                        std::to_string(lineno));
    const std::string full = section + "." + key;
    auto it = schema().find(full);
    if (it == schema().end())
      throw ConfigError("config: unknown key '" + full + "' at line " + std::to_string(lineno));
    it->second.apply(cfg, value);
  }
  validate_ranges(cfg);
  return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("config: cannot open " + path);
  std::ostringstream buffer;
  buffer << is.rdbuf();
  return parse_config_text(buffer.str());
}

}  // namespace kslab

namespace kslab {

CsvTable read_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("csv: cannot open " + path);
  CsvTable table;
  std::string line;
  bool header = true;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
      const auto comma = line.find(',', start);
      cells.push_back(line.substr(start, comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (header) {
      table.columns = cells;
      header = false;
      continue;
    }
    std::vector<double> row;
    row.reserve(cells.size());
    for (const auto& c : cells) row.push_back(std::stod(c));
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace kslab

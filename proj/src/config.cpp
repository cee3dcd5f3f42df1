#include "crifem/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

namespace crifem {

MaterialParams RunConfig::materials() const {
  MaterialParams mat;
  switch (lambda_spec) {
    case LambdaSpec::ratio:
      mat = {mu_plus, mu_minus, lambda_ratio * mu_plus, lambda_ratio * mu_minus};
      break;
    case LambdaSpec::explicit_pair:
      mat = {mu_plus, mu_minus, lambda_plus, lambda_minus};
      break;
    case LambdaSpec::poisson:
      return MaterialParams::from_shear_poisson(mu_plus, nu_plus, mu_minus, nu_minus);
  }
  mat.validate();
  return mat;
}

double RunConfig::tau_value() const {
  return tau > 0 ? tau : 10.0 * std::max(mu_plus, mu_minus);
}

LevelSet RunConfig::level_set() const {
  switch (interface_kind) {
    case LevelSet::Kind::circle: return make_circle(r0);
    case LevelSet::Kind::ellipse: return make_ellipse(r0);
    case LevelSet::Kind::line: return make_vertical_line(line_x);
  }
  return {};
}

ManufacturedSolution RunConfig::solution() const {
  const LevelSet ls = level_set();
  if (fixed_force) return make_fixed_force_only(ls, materials());
  if (interface_kind == LevelSet::Kind::line)
    return make_piecewise_linear_solution(ls, materials());
  return make_radial_solution(ls, materials());
}

void apply_example(RunConfig& cfg, const std::string& id) {
  cfg.example = id;
  cfg.fixed_force = false;
  cfg.xmin = cfg.ymin = -1.0;
  cfg.xmax = cfg.ymax = 1.0;
  auto set = [&](LevelSet::Kind kind, double r0, double mu_p, double ratio) {
    cfg.interface_kind = kind;
    cfg.r0 = r0;
    cfg.mu_minus = 1.0;
    cfg.mu_plus = mu_p;
    cfg.lambda_spec = RunConfig::LambdaSpec::ratio;
    cfg.lambda_ratio = ratio;
  };
  using K = LevelSet::Kind;
  if (id == "1a") {
    set(K::circle, 0.36, 100.0, 5.0);
  } else if (id == "1b") {
    set(K::circle, 0.48, 10.0, 5.0);
  } else if (id == "2a") {
    set(K::circle, 0.7, 10.0, 100.0);
  } else if (id == "2b") {
    set(K::circle, 0.6, 10.0, 1000.0);
  } else if (id == "3a") {
    set(K::ellipse, 0.4, 10.0, 5.0);
  } else if (id == "3b") {
    set(K::ellipse, 0.3, 100.0, 5.0);
  } else if (id == "4") {
    cfg.interface_kind = K::ellipse;
    cfg.r0 = 0.3;
    cfg.mu_minus = 1.0;
    cfg.mu_plus = 100.0;
    cfg.lambda_spec = RunConfig::LambdaSpec::poisson;
    cfg.nu_minus = 0.28;
    cfg.nu_plus = 0.4;
    cfg.fixed_force = true;
  } else if (id == "custom") {
    // leave fields as they are
  } else {
    throw InvalidInputError("example: unknown id '" + id + "' (1a 1b 2a 2b 3a 3b 4 custom)");
  }
}

namespace {

double parse_double(const std::string& key, const std::string& value) {
  char* end = nullptr;
  const double v = std::strtod(value.c_str(), &end);
  if (end == value.c_str() || *end != '\0' || !std::isfinite(v))
    throw InvalidInputError(key + ": cannot parse number '" + value + "'");
  return v;
}

int parse_int(const std::string& key, const std::string& value) {
  char* end = nullptr;
  const long v = std::strtol(value.c_str(), &end, 10);
  if (end == value.c_str() || *end != '\0')
    throw InvalidInputError(key + ": cannot parse integer '" + value + "'");
  return static_cast<int>(v);
}

struct LambdaKeys {
  bool ratio = false, explicit_pair = false, poisson = false;
};

void apply_key(RunConfig& cfg, LambdaKeys& lk, const std::string& key, const std::string& value) {
  if (key == "example") {
    // handled up front
  } else if (key == "xmin") {
    cfg.xmin = parse_double(key, value);
  } else if (key == "xmax") {
    cfg.xmax = parse_double(key, value);
  } else if (key == "ymin") {
    cfg.ymin = parse_double(key, value);
  } else if (key == "ymax") {
    cfg.ymax = parse_double(key, value);
  } else if (key == "k_min") {
    cfg.k_min = parse_int(key, value);
  } else if (key == "k_max") {
    cfg.k_max = parse_int(key, value);
  } else if (key == "interface") {
    if (value == "circle")
      cfg.interface_kind = LevelSet::Kind::circle;
    else if (value == "ellipse")
      cfg.interface_kind = LevelSet::Kind::ellipse;
    else if (value == "line")
      cfg.interface_kind = LevelSet::Kind::line;
    else
      throw InvalidInputError("interface: expected circle|ellipse|line, got '" + value + "'");
  } else if (key == "r0") {
    cfg.r0 = parse_double(key, value);
  } else if (key == "line_x") {
    cfg.line_x = parse_double(key, value);
  } else if (key == "mu_minus") {
    cfg.mu_minus = parse_double(key, value);
  } else if (key == "mu_plus") {
    cfg.mu_plus = parse_double(key, value);
  } else if (key == "lambda_ratio") {
    cfg.lambda_ratio = parse_double(key, value);
    lk.ratio = true;
  } else if (key == "lambda_minus") {
    cfg.lambda_minus = parse_double(key, value);
    lk.explicit_pair = true;
  } else if (key == "lambda_plus") {
    cfg.lambda_plus = parse_double(key, value);
    lk.explicit_pair = true;
  } else if (key == "nu_minus") {
    cfg.nu_minus = parse_double(key, value);
    lk.poisson = true;
  } else if (key == "nu_plus") {
    cfg.nu_plus = parse_double(key, value);
    lk.poisson = true;
  } else if (key == "tau") {
    cfg.tau = parse_double(key, value);
    if (!(cfg.tau > 0)) throw InvalidInputError("tau: must be positive, got " + value);
  } else if (key == "edge_set") {
    if (value == "interior")
      cfg.edge_set = StabilizationConfig::EdgeSet::interior;
    else if (value == "all")
      cfg.edge_set = StabilizationConfig::EdgeSet::all;
    else
      throw InvalidInputError("edge_set: expected interior|all, got '" + value + "'");
  } else if (key == "solver") {
    if (value != "cg" && value != "dense")
      throw InvalidInputError("solver: expected cg|dense, got '" + value + "'");
    cfg.solver = value;
  } else if (key == "tol") {
    cfg.tol = parse_double(key, value);
    if (!(cfg.tol > 0)) throw InvalidInputError("tol: must be positive, got " + value);
  } else if (key == "maxiter") {
    cfg.maxiter = parse_int(key, value);
  } else if (key == "out") {
    cfg.out_dir = value;
  } else if (key == "threads") {
    cfg.threads = parse_int(key, value);
    if (cfg.threads < 1) throw InvalidInputError("threads: must be >= 1, got " + value);
  } else if (key == "vtk") {
    cfg.write_vtk = parse_int(key, value) != 0;
  } else {
    throw InvalidInputError("unknown config key '" + key + "'");
  }
}

void validate(const RunConfig& cfg) {
  if (cfg.k_min < 0) throw InvalidInputError("k_min: must be >= 0");
  if (cfg.k_min > cfg.k_max) throw InvalidInputError("k_min: must be <= k_max");
  if (!(cfg.xmax > cfg.xmin)) throw InvalidInputError("xmax: must exceed xmin");
  if (!(cfg.ymax > cfg.ymin)) throw InvalidInputError("ymax: must exceed ymin");
  if (!(cfg.mu_minus > 0)) throw InvalidInputError("mu_minus: must be positive");
  if (!(cfg.mu_plus > 0)) throw InvalidInputError("mu_plus: must be positive");
  if (cfg.interface_kind != LevelSet::Kind::line && !(cfg.r0 > 0))
    throw InvalidInputError("r0: must be positive");
  cfg.materials();  // surfaces lambda/nu violations with their key names
}

}  // namespace

RunConfig parse_config(const std::optional<std::string>& file_path,
                       const std::map<std::string, std::string>& overrides) {
  std::vector<std::pair<std::string, std::string>> file_entries;
  if (file_path) {
    std::ifstream is(*file_path);
    if (!is) throw IoError("parse_config: cannot open config file", *file_path);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
      ++lineno;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      const auto first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos) continue;
      const auto last = line.find_last_not_of(" \t\r");
      line = line.substr(first, last - first + 1);
      const auto eq = line.find('=');
      if (eq == std::string::npos)
        throw InvalidInputError("parse_config: line " + std::to_string(lineno) +
                                " is not key=value: '" + line + "'");
      auto trim = [](std::string s) {
        const auto a = s.find_first_not_of(" \t");
        const auto b = s.find_last_not_of(" \t");
        return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
      };
      file_entries.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
  }

  // flags win over file entries
  std::map<std::string, std::string> merged;
  for (const auto& [k, v] : file_entries) merged[k] = v;
  for (const auto& [k, v] : overrides) merged[k] = v;

  RunConfig cfg;
  if (auto it = merged.find("example"); it != merged.end()) apply_example(cfg, it->second);

  LambdaKeys lk;
  for (const auto& [k, v] : merged) apply_key(cfg, lk, k, v);
  const int kinds = int(lk.ratio) + int(lk.explicit_pair) + int(lk.poisson);
  if (kinds > 1)
    throw InvalidInputError(
        "lambda_ratio/lambda_minus/nu_minus: choose one way to specify lambda");
  if (lk.ratio) cfg.lambda_spec = RunConfig::LambdaSpec::ratio;
  if (lk.explicit_pair) cfg.lambda_spec = RunConfig::LambdaSpec::explicit_pair;
  if (lk.poisson) cfg.lambda_spec = RunConfig::LambdaSpec::poisson;

  validate(cfg);
  return cfg;
}

std::string config_keys_help() {
  return "example        built-in setup: 1a 1b 2a 2b 3a 3b 4 custom\n"
         "xmin xmax ymin ymax   domain rectangle (default -1 1 -1 1)\n"
         "k_min k_max    refinement range, cell size h = 2^-k (default 3 6)\n"
         "interface      circle | ellipse | line\n"
         "r0             interface radius parameter (circle/ellipse)\n"
         "line_x         x-position of the vertical line interface\n"
         "mu_minus mu_plus      shear moduli per side\n"
         "lambda_ratio   lambda = ratio * mu on both sides\n"
         "lambda_minus lambda_plus   explicit Lame lambda per side\n"
         "nu_minus nu_plus           Poisson ratios per side (with mu)\n"
         "tau            jump penalty factor (default 10 * max(mu))\n"
         "edge_set       interior | all (default interior)\n"
         "solver         cg | dense (default cg)\n"
         "tol            solver relative residual tolerance (default 1e-12)\n"
         "maxiter        CG iteration cap (default 2n+200)\n"
         "out            output directory (default out)\n"
         "threads        worker threads (default 1)\n"
         "vtk            write per-level VTK files, 0|1 (default 1)\n";
}

}  // namespace crifem

#pragma once

#include <map>
#include <optional>
#include <string>

#include "crifem/assembly.hpp"
#include "crifem/elements.hpp"
#include "crifem/interface.hpp"
#include "crifem/postproc.hpp"

namespace crifem {

/// Fully resolved run description. Built-in example ids: 1a, 1b, 2a, 2b, 3a,
/// 3b, 4, or "custom".
struct RunConfig {
  std::string example = "custom";
  double xmin = -1.0, xmax = 1.0, ymin = -1.0, ymax = 1.0;
  int k_min = 3, k_max = 6;
  LevelSet::Kind interface_kind = LevelSet::Kind::circle;
  double r0 = 0.36;
  double line_x = 0.0;
  double mu_minus = 1.0, mu_plus = 1.0;
  enum class LambdaSpec { ratio, explicit_pair, poisson } lambda_spec = LambdaSpec::ratio;
  double lambda_ratio = 5.0;
  double lambda_minus = 0.0, lambda_plus = 0.0;
  double nu_minus = 0.0, nu_plus = 0.0;
  double tau = -1.0;  // < 0 means the default 10 * max(mu+, mu-)
  StabilizationConfig::EdgeSet edge_set = StabilizationConfig::EdgeSet::interior;
  std::string solver = "cg";
  double tol = 1e-12;
  int maxiter = 0;
  std::string out_dir = "out";
  int threads = 1;
  bool write_vtk = true;
  bool fixed_force = false;  // example 4: given body force, no exact solution

  MaterialParams materials() const;
  double tau_value() const;
  LevelSet level_set() const;
  ManufacturedSolution solution() const;
  StabilizationConfig stabilization() const { return {tau_value(), edge_set}; }
};

/// Applies one of the built-in example presets onto cfg.
void apply_example(RunConfig& cfg, const std::string& id);

/// Parses an optional key=value config file, then applies overrides (flag
/// values win over file values). The `example` key, if present, is applied
/// before all other keys so explicit keys refine the preset. Throws
/// InvalidInputError naming the offending key.
RunConfig parse_config(const std::optional<std::string>& file_path,
                       const std::map<std::string, std::string>& overrides);

/// One line per accepted config key, for --help-config.
std::string config_keys_help();

}  // namespace crifem

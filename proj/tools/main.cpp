#include <CLI11.hpp>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "crifem/driver.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Stabilized nonconforming immersed finite elements for planar interface "
               "elasticity: single solves and refinement sweeps"};

  std::string config_path, example, edge_set, out_dir, solver;
  int k_min = -1, k_max = -1, threads = -1;
  double tau = 0.0, tol = 0.0;
  bool help_config = false;

  app.add_option("--config", config_path, "key=value config file");
  app.add_option("--example", example, "built-in example id (1a 1b 2a 2b 3a 3b 4 custom)");
  app.add_option("--k-min", k_min, "coarsest refinement level (h = 2^-k)");
  app.add_option("--k-max", k_max, "finest refinement level");
  app.add_option("--tau", tau, "jump penalty factor");
  app.add_option("--edge-set", edge_set, "stabilized edges: interior|all");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--threads", threads, "worker threads");
  app.add_option("--solver", solver, "linear solver: cg|dense");
  app.add_option("--tol", tol, "solver relative tolerance");
  app.add_flag("--help-config", help_config, "list config file keys and exit");

  CLI11_PARSE(app, argc, argv);

  if (help_config) {
    std::cout << crifem::config_keys_help();
    return 0;
  }

  std::map<std::string, std::string> overrides;
  if (!example.empty()) overrides["example"] = example;
  if (k_min >= 0) overrides["k_min"] = std::to_string(k_min);
  if (k_max >= 0) overrides["k_max"] = std::to_string(k_max);
  if (app.count("--tau")) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", tau);
    overrides["tau"] = buf;
  }
  if (!edge_set.empty()) overrides["edge_set"] = edge_set;
  if (!out_dir.empty()) overrides["out"] = out_dir;
  if (threads > 0) overrides["threads"] = std::to_string(threads);
  if (!solver.empty()) overrides["solver"] = solver;
  if (app.count("--tol")) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", tol);
    overrides["tol"] = buf;
  }

  try {
    const auto file = config_path.empty() ? std::nullopt : std::make_optional(config_path);
    const crifem::RunConfig cfg = crifem::parse_config(file, overrides);
    return crifem::run(cfg, std::cout);
  } catch (const crifem::IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 5;
  } catch (const crifem::InvalidInputError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }
}

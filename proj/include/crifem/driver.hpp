#pragma once

#include <functional>
#include <iosfwd>
#include <vector>

#include "crifem/config.hpp"
#include "crifem/postproc.hpp"
#include "crifem/solver.hpp"

namespace crifem {

struct LevelRun {
  int k = 0;
  int n_dofs = 0;
  ErrorReport report;  // error fields valid when the run has an exact solution
  SolveReport solve;
  bool has_exact = true;
};

struct SweepResult {
  std::vector<LevelRun> levels;
  ConvergenceTable table;
};

/// Callback fired after each level with the full solve state, before it is
/// discarded (used for VTK export and by tests).
using LevelCallback = std::function<void(const LevelRun&, const Mesh&,
                                         const std::vector<ElementClass>&,
                                         const Eigen::VectorXd&)>;

/// Runs mesh -> classify -> assemble -> solve -> norms for each k in the
/// configured range. No file output.
SweepResult run_sweep(const RunConfig& cfg, const LevelCallback& on_level = {});

/// Full CLI run: sweep plus stdout table, convergence CSV and per-level VTK
/// files under cfg.out_dir. Returns a process exit code (0 ok, 2 config,
/// 3 assembly, 4 solver, 5 io).
int run(const RunConfig& cfg, std::ostream& os);

/// Formats the convergence table in the 1/h | error | order layout.
std::string format_table(const ConvergenceTable& table);

}  // namespace crifem

#include "crifem/driver.hpp"

#include <cstdio>
#include <filesystem>
#include <ostream>
#include <sstream>

namespace crifem {

SweepResult run_sweep(const RunConfig& cfg, const LevelCallback& on_level) {
  const LevelSet ls = cfg.level_set();
  const MaterialParams mat = cfg.materials();
  const ManufacturedSolution sol = cfg.solution();
  const StabilizationConfig stab = cfg.stabilization();

  SweepResult result;
  std::vector<ErrorReport> reports;
  for (int k = cfg.k_min; k <= cfg.k_max; ++k) {
    const Mesh mesh = build_uniform_mesh(cfg.xmin, cfg.xmax, cfg.ymin, cfg.ymax, k);
    const auto classes = classify_all(ls, mesh, cfg.threads);
    GlobalSystem sys = assemble(mesh, classes, mat, sol.f, stab, cfg.threads);
    const auto g = sol.has_exact ? sol.u
                                 : std::function<Eigen::Vector2d(Point)>(
                                       [](Point) { return Eigen::Vector2d::Zero(); });
    sys = apply_dirichlet(sys, mesh, classes, g);

    LevelRun level;
    level.k = k;
    level.n_dofs = sys.n;
    level.has_exact = sol.has_exact;
    Eigen::VectorXd uh;
    if (cfg.solver == "dense") {
      uh = solve_dense(sys);
      level.solve.final_residual =
          sys.rhs.norm() > 0 ? (sys.rhs - sys.multiply(uh)).norm() / sys.rhs.norm() : 0.0;
    } else {
      auto [x, rep] = solve_cg(sys, cfg.tol, cfg.maxiter, cfg.threads);
      uh = std::move(x);
      level.solve = rep;
    }
    if (sol.has_exact) {
      level.report = error_norms(mesh, classes, mat, ls, uh, sol, &stab, cfg.threads);
      reports.push_back(level.report);
    } else {
      level.report.inv_h = static_cast<int>(std::lround(1.0 / mesh.h));
    }
    if (on_level) on_level(level, mesh, classes, uh);
    result.levels.push_back(std::move(level));
  }
  result.table = convergence_table(std::move(reports));
  result.table.tau = stab.tau;
  result.table.mu_minus = mat.mu_minus;
  result.table.mu_plus = mat.mu_plus;
  result.table.lambda_ratio = mat.lambda_minus / mat.mu_minus;
  result.table.has_exact = sol.has_exact;
  if (!sol.has_exact) {
    for (const auto& level : result.levels) {
      ErrorReport r;
      r.inv_h = level.report.inv_h;
      r.l2 = r.h1 = r.h1_semi = r.div = std::numeric_limits<double>::quiet_NaN();
      result.table.rows.push_back(r);
    }
  }
  return result;
}

namespace {

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

std::string order_str(double o) {
  if (std::isnan(o)) return "     -";
  return fmt("%6.3f", o);
}

}  // namespace

std::string format_table(const ConvergenceTable& table) {
  std::ostringstream os;
  if (!table.has_exact) {
    os << "(no exact solution: error norms not available)\n";
    return os.str();
  }
  os << "  1/h          L2   order          H1   order         div   order\n";
  for (const auto& r : table.rows) {
    char head[16];
    std::snprintf(head, sizeof head, "%5d", r.inv_h);
    os << head << "   " << fmt("%9.3e", r.l2) << "  " << order_str(r.l2_order) << "   "
       << fmt("%9.3e", r.h1) << "  " << order_str(r.h1_order) << "   " << fmt("%9.3e", r.div)
       << "  " << order_str(r.div_order) << "\n";
  }
  return os.str();
}

int run(const RunConfig& cfg, std::ostream& os) {
  try {
    const MaterialParams mat = cfg.materials();
    os << "example=" << cfg.example << " interface="
       << (cfg.interface_kind == LevelSet::Kind::circle
               ? "circle"
               : cfg.interface_kind == LevelSet::Kind::ellipse ? "ellipse" : "line")
       << (cfg.interface_kind == LevelSet::Kind::line ? " line_x=" + std::to_string(cfg.line_x)
                                                      : " r0=" + std::to_string(cfg.r0))
       << " mu-=" << mat.mu_minus << " mu+=" << mat.mu_plus << " lambda-=" << mat.lambda_minus
       << " lambda+=" << mat.lambda_plus << " tau=" << cfg.tau_value() << " edge_set="
       << (cfg.edge_set == StabilizationConfig::EdgeSet::interior ? "interior" : "all")
       << " solver=" << cfg.solver << "\n";

    std::error_code ec;
    std::filesystem::create_directories(cfg.out_dir, ec);
    if (ec) throw IoError("run: cannot create output directory", cfg.out_dir);

    const SweepResult sweep = run_sweep(
        cfg, [&](const LevelRun& level, const Mesh& mesh, const std::vector<ElementClass>& classes,
                 const Eigen::VectorXd& uh) {
          os << "[k=" << level.k << "] 1/h=" << level.report.inv_h << " dofs=" << level.n_dofs
             << " iterations=" << level.solve.iterations
             << " residual=" << fmt("%.2e", level.solve.final_residual)
             << " time=" << fmt("%.2f", level.solve.seconds) << "s\n";
          if (cfg.write_vtk) {
            const std::string path =
                cfg.out_dir + "/" + cfg.example + "_k" + std::to_string(level.k) + ".vtk";
            export_vtk(mesh, classes, mat, uh, path);
          }
        });

    os << format_table(sweep.table);
    export_csv(sweep.table, cfg.out_dir + "/" + cfg.example + ".csv");
    return 0;
  } catch (const InvalidInputError& e) {
    os << "config error: " << e.what() << "\n";
    return 2;
  } catch (const ConstructionError& e) {
    os << "assembly error: " << e.what() << "\n";
    return 3;
  } catch (const DegenerateCutError& e) {
    os << "assembly error: " << e.what() << "\n";
    return 3;
  } catch (const AssumptionViolationError& e) {
    os << "assembly error: " << e.what() << "\n";
    return 3;
  } catch (const ConvergenceError& e) {
    os << "solver error: " << e.what() << "\n";
    return 4;
  } catch (const NotSpdError& e) {
    os << "solver error: " << e.what() << "\n";
    return 4;
  } catch (const SingularMatrixError& e) {
    os << "solver error: " << e.what() << "\n";
    return 4;
  } catch (const IoError& e) {
    os << "io error: " << e.what() << "\n";
    return 5;
  }
}

}  // namespace crifem

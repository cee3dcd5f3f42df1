#include "crifem/solver.hpp"

#include <chrono>
#include <cmath>

#include "crifem/dense.hpp"

namespace crifem {

std::pair<Eigen::VectorXd, SolveReport> solve_cg(const GlobalSystem& sys, double tol, int maxiter,
                                                 int threads) {
  const auto start = std::chrono::steady_clock::now();
  const int n = sys.n;
  if (maxiter <= 0) maxiter = 2 * n + 200;

  SolveReport report;
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  const double bnorm = sys.rhs.norm();
  if (bnorm == 0.0) {
    report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return {x, report};
  }

  Eigen::VectorXd diag(n);
  for (int r = 0; r < n; ++r) {
    double d = 0.0;
    for (int k = sys.row_ptr[r]; k < sys.row_ptr[r + 1]; ++k)
      if (sys.cols[k] == r) d = sys.vals[k];
    if (!(d > 0.0)) throw NotSpdError("solve_cg: nonpositive diagonal entry at row " +
                                      std::to_string(r));
    diag[r] = d;
  }

  Eigen::VectorXd r = sys.rhs;  // x0 = 0
  Eigen::VectorXd z = r.cwiseQuotient(diag);
  Eigen::VectorXd p = z;
  double rz = r.dot(z);
  std::vector<double> history;
  history.reserve(256);
  int restarts = 0;
  auto fmt = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return std::string(buf);
  };

  for (int it = 1; it <= maxiter; ++it) {
    const Eigen::VectorXd q = sys.multiply(p, threads);
    const double pq = p.dot(q);
    if (!(pq > 0.0))
      throw NotSpdError("solve_cg: non-positive curvature encountered (p'Kp = " +
                        std::to_string(pq) + ")");
    const double alpha = rz / pq;
    x += alpha * p;
    r -= alpha * q;
    const double rel = r.norm() / bnorm;
    history.push_back(rel);
    if (rel <= tol) {
      // recurrence residual can drift; accept on the true residual only
      const double true_rel = (sys.rhs - sys.multiply(x, threads)).norm() / bnorm;
      if (true_rel <= tol) {
        report.iterations = it;
        report.final_residual = true_rel;
        report.seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        return {x, report};
      }
      if (++restarts > 8)
        throw ConvergenceError("solve_cg: true residual stagnated at " + fmt(true_rel) +
                                   " above tol " + fmt(tol) + " (roundoff floor; loosen tol)",
                               std::move(history));
      // clean restart from the true residual
      r = sys.rhs - sys.multiply(x, threads);
      z = r.cwiseQuotient(diag);
      p = z;
      rz = r.dot(z);
      continue;
    }
    z = r.cwiseQuotient(diag);
    const double rz_next = r.dot(z);
    p = z + (rz_next / rz) * p;
    rz = rz_next;
  }
  throw ConvergenceError("solve_cg: no convergence within " + std::to_string(maxiter) +
                             " iterations (last residual " +
                             fmt(history.empty() ? 1.0 : history.back()) + ")",
                         std::move(history));
}

Eigen::VectorXd solve_dense(const GlobalSystem& sys) {
  if (sys.n > 5000)
    throw InvalidInputError("solve_dense: dimension " + std::to_string(sys.n) +
                            " exceeds the 5000 oracle limit");
  return gauss_solve(sys.dense(), sys.rhs);
}

}  // namespace crifem

#include "elastdg/solve.hpp"

#include <Eigen/UmfPackSupport>
#include <chrono>
#include <cmath>
#include <unsupported/Eigen/IterativeSolvers>

namespace elastdg {

namespace {

DiscreteSolution expand(const SparseSystem& sys, const Eigen::VectorXd& reduced) {
  Eigen::VectorXd full;
  if (sys.kept.empty()) {
    full = reduced;
  } else {
    full = Eigen::VectorXd::Zero(sys.full_size());
    for (int i = 0; i < reduced.size(); ++i) full[sys.kept[i]] = reduced[i];
  }
  DiscreteSolution sol;
  sol.stress = full.head(sys.n_stress);
  sol.rotation = full.tail(sys.n_rotation);
  return sol;
}

double relative_residual(const SparseSystem& sys, const Eigen::VectorXd& x) {
  const double bnorm = sys.rhs.norm();
  if (bnorm == 0.0) return (sys.matrix * x).norm();
  return (sys.matrix * x - sys.rhs).norm() / bnorm;
}

}  // namespace

Eigen::VectorXd solve_minres(const SparseSystem& system, double tolerance,
                             int max_iterations) {
  using SpMat = Eigen::SparseMatrix<double>;
  const SpMat& A = system.matrix;
  const int n = static_cast<int>(A.rows());

  // Symmetric equilibration; the rotation block has zero diagonal, so
  // scale by the largest absolute row entry instead.
  Eigen::VectorXd s(n);
  for (int c = 0; c < A.outerSize(); ++c) {
    double m = 0.0;
    for (SpMat::InnerIterator it(A, c); it; ++it)
      m = std::max(m, std::abs(it.value()));
    s[c] = m > 0 ? 1.0 / std::sqrt(m) : 1.0;
  }
  SpMat As = s.asDiagonal() * A * s.asDiagonal();
  const Eigen::VectorXd bs = s.asDiagonal() * system.rhs;

  Eigen::MINRES<SpMat, Eigen::Lower | Eigen::Upper, Eigen::IdentityPreconditioner>
      minres(As);
  minres.setTolerance(tolerance);
  minres.setMaxIterations(max_iterations);
  const Eigen::VectorXd ys = minres.solve(bs);
  return s.asDiagonal() * ys;
}

std::pair<DiscreteSolution, SolveReport> solve(const SparseSystem& system) {
  const auto t0 = std::chrono::steady_clock::now();
  SolveReport report;
  report.dimension = system.reduced_size();
  if (report.dimension < 1) throw SolverError("empty linear system");

  Eigen::VectorXd x;
  if (system.rhs.norm() == 0.0) {
    x = Eigen::VectorXd::Zero(report.dimension);
  } else {
    Eigen::UmfPackLU<Eigen::SparseMatrix<double>> lu;
    lu.umfpackControl()[UMFPACK_STRATEGY] = UMFPACK_STRATEGY_SYMMETRIC;
    lu.compute(system.matrix);
    if (lu.info() != Eigen::Success) {
      const double status = lu.umfpackFactorizeReturncode();
      if (status == UMFPACK_ERROR_out_of_memory) {
        x = solve_minres(system, 1e-13, 20 * report.dimension);
        report.iterative_fallback = true;
      } else {
        throw SolverError(
            "sparse factorization failed: matrix singular or near-singular "
            "(possible resonance, or DG penalty below threshold)");
      }
    } else {
      x = lu.solve(system.rhs);
      if (relative_residual(system, x) > kResidualBound)
        x += lu.solve(Eigen::VectorXd(system.rhs - system.matrix * x));
    }
  }

  report.rel_residual = relative_residual(system, x);
  if (!(report.rel_residual <= kResidualBound))
    throw SolverError("solve not certified: relative residual " +
                      std::to_string(report.rel_residual));
  report.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {expand(system, x), report};
}

}  // namespace elastdg

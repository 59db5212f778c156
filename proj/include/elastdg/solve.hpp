#pragma once

#include <utility>

#include "elastdg/assembly.hpp"
#include "elastdg/types.hpp"

namespace elastdg {

/// Coefficient vectors of a solved system, expanded to the full
/// numbering (eliminated Sigma dofs reappear as zeros).
struct DiscreteSolution {
  Eigen::VectorXd stress;
  Eigen::VectorXd rotation;
};

struct SolveReport {
  double rel_residual = 0.0;  // ||Mx-b|| / ||b||, certified <= 1e-10
  double seconds = 0.0;
  int dimension = 0;
  bool iterative_fallback = false;
};

inline constexpr double kResidualBound = 1e-10;

/// Direct sparse LU factorization (UMFPACK, symmetric strategy) with
/// residual certification and one step of iterative refinement. Falls
/// back to diagonally scaled MINRES only if the factorization runs out
/// of memory. Throws SolverError when the matrix is singular or the
/// residual cannot be certified; for this problem class that signals a
/// wave number near a resonance or a DG penalty below its threshold.
std::pair<DiscreteSolution, SolveReport> solve(const SparseSystem& system);

/// Minimal-residual Krylov solve with symmetric diagonal equilibration.
/// Exposed for testing and for memory-bound runs.
Eigen::VectorXd solve_minres(const SparseSystem& system, double tolerance,
                             int max_iterations);

}  // namespace elastdg

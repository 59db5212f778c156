#pragma once

#include <Eigen/Core>
#include <Eigen/LU>
#include <stdexcept>
#include <string>

namespace elastdg {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

/// Invalid run configuration: bad flags, unsupported polynomial or
/// quadrature degrees, inconsistent experiment parameters.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Broken geometric or topological input: degenerate cells, requests for
/// the second side of a boundary face, mismatched trace point counts.
struct StructuralError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Parameter outside its mathematical domain (e.g. Poisson ratio >= 1/2,
/// nonpositive errors fed to a rate computation).
struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A linear solve that could not be certified: singular or near-singular
/// factorization (possible resonance, or a DG penalty below threshold),
/// or a residual above the acceptance bound.
struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace elastdg

#pragma once

#include <Eigen/SparseCore>
#include <optional>
#include <string>
#include <vector>

#include "elastdg/mesh.hpp"
#include "elastdg/model.hpp"
#include "elastdg/spaces.hpp"
#include "elastdg/types.hpp"

namespace elastdg {

struct SystemMetadata {
  Scheme scheme = Scheme::CG;
  int k = 1;
  int n = 0;
  double kappa = 1.0;
  double penalty = 0.0;  // DG stabilization parameter, unused for CG
  LameParams params;
  int quad_bump = 0;
};

/// Assembled symmetric indefinite saddle-point system. Stress unknowns
/// come first, rotation unknowns last; the rotation-rotation block is
/// identically zero. The weak-symmetry constraint rows are scaled by
/// -kappa^2 so the matrix is symmetric. When essential Sigma constraints
/// were eliminated, `kept` maps reduced indices back to full ones.
struct SparseSystem {
  Eigen::SparseMatrix<double> matrix;
  Eigen::VectorXd rhs;
  int n_stress = 0;
  int n_rotation = 0;
  std::vector<int> kept;  // empty when nothing was eliminated
  SystemMetadata meta;

  int full_size() const { return n_stress + n_rotation; }
  int reduced_size() const { return static_cast<int>(matrix.rows()); }
};

/// Div-conforming scheme: row-wise BDM stress space, discontinuous
/// P_{k-1} rotations. The nonhomogeneous Dirichlet datum enters the right
/// hand side as -kappa^2 int_Gamma g.(tau n).
SparseSystem assemble_cg(const Mesh& mesh, int k, const LameParams& params,
                         WaveNumber kappa, const ManufacturedSolution& ms,
                         int quad_bump = 0);

/// Interior penalty scheme on the fully discontinuous P_k tensor space:
/// volume div.div and compliance terms, penalty a/h_F [[sigma]].[[tau]]
/// and the symmetric mean-divergence coupling on interior and Sigma
/// faces, Dirichlet data on Gamma faces via the right hand side.
SparseSystem assemble_dg(const Mesh& mesh, int k, const LameParams& params,
                         WaveNumber kappa, double penalty,
                         const ManufacturedSolution& ms, int quad_bump = 0);

/// Average and jump of tensor traces at matched face quadrature points.
/// Interior: mean = (t1+t2)/2, jump = t1 n + t2 (-n); boundary (second
/// side empty): mean = trace, jump = trace n.
struct FaceOperatorSample {
  std::vector<Mat2> mean;
  std::vector<Vec2> jump;
};
FaceOperatorSample eval_jump_average(const std::vector<Mat2>& first_side,
                                     const std::vector<Mat2>& second_side,
                                     const Vec2& normal_of_first);

/// Empirical sup of h_K ||v||^2_{dK} / ||v||^2_K over random v in P_k(K),
/// the constant behind the discrete trace inequality. Deterministic for a
/// fixed seed.
double discrete_trace_ratio(const Mesh& mesh, int k, int samples_per_cell,
                            unsigned seed = 0x5eed);

/// MatrixMarket coordinate export (symmetric, lower triangle).
void write_matrix_market(const SparseSystem& system, const std::string& path);

}  // namespace elastdg

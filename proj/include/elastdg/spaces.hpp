#pragma once

#include <functional>
#include <vector>

#include "elastdg/basis.hpp"
#include "elastdg/bdm.hpp"
#include "elastdg/mesh.hpp"
#include "elastdg/types.hpp"

namespace elastdg {

enum class Scheme { CG, DG };

/// Skew tensors are stored by their single scalar component:
/// skew(rho) = [[0, -rho], [rho, 0]], so the scalar matching the rotation
/// of a displacement field is rho = (d1 u2 - d2 u1) / 2.
inline Mat2 skew_tensor(double rho) {
  Mat2 s;
  s << 0.0, -rho, rho, 0.0;
  return s;
}

/// Global numbering for the stress/rotation unknowns.
///
/// CG stress (row-wise BDM, normal-continuous): for tensor row r, face f,
/// moment i: r*row_stride + f*(k+1) + i; interior dofs follow all edge
/// dofs. Edge dofs are shared between adjacent cells with a sign fixed by
/// the global edge orientation. Normal moments on Sigma edges are listed
/// in `constrained` (essential traction condition).
///
/// DG stress (no sharing): cell c, component rc in {11,12,21,22}, basis i:
/// c*4*dim + rc*dim + i.
///
/// Rotation dofs trail the stress block in both schemes.
/// Immutable after construction; fine for concurrent reads.
struct DofMap {
  Scheme scheme = Scheme::CG;
  int k = 1;
  int n_stress = 0;
  int n_rotation = 0;
  int rot_dim = 0;          // dim P_{k-1}
  int row_stride = 0;       // CG: stress dofs per tensor row
  int stress_per_cell = 0;  // local gather width (CG: 2*n_shape, DG: 4*dim)
  std::vector<int> cell_stress;   // flattened n_cells x stress_per_cell
  std::vector<double> cell_sign;  // CG orientation signs (empty for DG)
  std::vector<int> constrained;   // global stress ids pinned to zero

  int total() const { return n_stress + n_rotation; }
  int rotation_index(int cell, int i) const {
    return n_stress + cell * rot_dim + i;
  }
  const int* stress_indices(int cell) const {
    return cell_stress.data() + static_cast<std::size_t>(cell) * stress_per_cell;
  }
  const double* stress_signs(int cell) const {
    return cell_sign.empty()
               ? nullptr
               : cell_sign.data() + static_cast<std::size_t>(cell) * stress_per_cell;
  }
};

DofMap build_dofmap(const Mesh& mesh, int k, Scheme scheme);

/// Global BDM interpolation of a smooth vector field: edge normal moments
/// against Legendre polynomials in the global edge parameter, interior
/// moments against N_{k-1} of the Piola pullback. Returns one coefficient
/// per global single-row BDM dof (size row_stride of the CG dof map).
Eigen::VectorXd bdm_interpolate(const Mesh& mesh, const BdmElement& element,
                                const std::function<Vec2(const Vec2&)>& v,
                                int quad_degree);

/// Cellwise L2 projection onto P_degree(T_h); coefficients in the
/// orthonormal reference basis, n_cells x dim(P_degree), row-major.
Eigen::VectorXd l2_project_scalar(const Mesh& mesh, int degree,
                                  const std::function<double(const Vec2&)>& f,
                                  int quad_degree);

/// Per-cell evaluation of a single-row BDM field at a fixed set of
/// reference points. Reference shape values are computed once at
/// construction; evaluate() applies the Piola map and gathered signed
/// coefficients of one cell.
class BdmCellEvaluator {
 public:
  BdmCellEvaluator(const BdmElement& element,
                   const Eigen::Matrix<double, Eigen::Dynamic, 2>& ref_points);

  /// `field` has row_stride entries (one BDM vector field). Uses the
  /// row-0 slots of the CG dof map for the local-to-global gather.
  void evaluate(const Mesh& mesh, const DofMap& map,
                const Eigen::VectorXd& field, int cell, Eigen::MatrixX2d* values,
                Eigen::VectorXd* divergence) const;

  const BdmElement& element() const { return *element_; }

 private:
  const BdmElement* element_;
  BdmElement::Values ref_;
};

/// One-shot variant for tests and small utilities.
void eval_bdm_field(const Mesh& mesh, const BdmElement& element,
                    const DofMap& map, const Eigen::VectorXd& field, int cell,
                    const Eigen::Matrix<double, Eigen::Dynamic, 2>& ref_points,
                    Eigen::MatrixX2d* values, Eigen::VectorXd* divergence);

/// Values of a cellwise scalar field (rotation, L2 projections) at
/// reference points of one cell.
Eigen::VectorXd eval_cellwise_scalar(
    const ScalarBasis& basis, const Eigen::VectorXd& coeffs, int cell,
    const Eigen::Matrix<double, Eigen::Dynamic, 2>& ref_points);

}  // namespace elastdg

#pragma once

#include <functional>

#include "elastdg/basis.hpp"
#include "elastdg/types.hpp"

namespace elastdg {

/// First-kind Nedelec space N_{k-1} on the reference triangle:
/// P_{k-2}^2 plus the homogeneous fields q(x,y)(-y,x) with q of degree
/// k-2. These are the test functions of the interior stress moments.
/// Empty for k = 1.
class NedelecBasis {
 public:
  explicit NedelecBasis(int k);

  int dim() const { return dim_; }

  /// Component values at reference points, (npts x dim) each.
  void evaluate(const Eigen::Matrix<double, Eigen::Dynamic, 2>& points,
                Eigen::MatrixXd* x, Eigen::MatrixXd* y) const;

 private:
  int k_;
  int dim_;
  ScalarBasis p_part_;
};

/// Geometry of the reference triangle's edges. Edge e joins local
/// vertices (e+1)%3 -> (e+2)%3; normals point outward.
struct ReferenceEdge {
  Vec2 a, b;
  Vec2 normal;
  double length;
};
const std::array<ReferenceEdge, 3>& reference_edges();

/// Brezzi-Douglas-Marini element of degree k >= 1 on the reference
/// triangle: full P_k^2 shape space with a nodal basis dual to
///   - per-edge moments of v.n against orthonormal Legendre in the edge
///     parameter (k+1 per edge), and
///   - interior moments against N_{k-1} (absent for k = 1).
/// Fields transform by the Piola map v = B v_ref / det B; the divergence
/// maps as div v = div_ref v_ref / det B. Immutable after construction.
class BdmElement {
 public:
  explicit BdmElement(int k);

  int degree() const { return k_; }
  int n_shape() const { return n_shape_; }
  int n_edge_dofs() const { return 3 * (k_ + 1); }
  int n_interior_dofs() const { return n_shape_ - n_edge_dofs(); }

  int edge_dof(int edge, int moment) const { return edge * (k_ + 1) + moment; }
  int interior_dof(int i) const { return n_edge_dofs() + i; }

  /// Reference values of all nodal shape functions; matrices are
  /// (npts x n_shape). `div` holds the reference divergence.
  struct Values {
    Eigen::MatrixXd x, y, div;
  };
  Values evaluate(const Eigen::Matrix<double, Eigen::Dynamic, 2>& points) const;

  /// Degrees of freedom of an arbitrary reference field, evaluated with
  /// quadrature of the given exactness degrees. The coefficient vector of
  /// the interpolant in the nodal basis equals these dofs.
  Eigen::VectorXd dofs_of(const std::function<Vec2(const Vec2&)>& v,
                          int edge_quad_degree, int volume_quad_degree) const;

  /// Interior moments only (empty vector for k = 1).
  Eigen::VectorXd interior_moments(const std::function<Vec2(const Vec2&)>& v,
                                   int volume_quad_degree) const;

  /// max-norm defect of dof(shape) = identity, recorded at construction.
  double nodality_defect() const { return nodality_defect_; }

 private:
  int k_;
  int n_shape_;
  ScalarBasis scalar_;
  NedelecBasis nedelec_;
  Eigen::MatrixXd coeff_;  // shape_j = sum_i coeff_(i,j) * component basis i
  double nodality_defect_ = 0.0;
};

}  // namespace elastdg

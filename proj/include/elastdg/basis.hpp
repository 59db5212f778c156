#pragma once

#include <Eigen/Core>

#include "elastdg/types.hpp"

namespace elastdg {

inline int poly_space_dim(int degree) { return (degree + 1) * (degree + 2) / 2; }

/// Orthonormal polynomial basis of P_k on the reference triangle
/// (0,0),(1,0),(0,1), built from scaled Legendre x Jacobi products.
/// Stable through high degrees; evaluation is singularity-free on the
/// closed triangle. Immutable.
class ScalarBasis {
 public:
  explicit ScalarBasis(int degree);

  int degree() const { return degree_; }
  int dim() const { return dim_; }

  /// Values of all basis functions at the given reference points,
  /// one row per point, one column per basis function. Optional
  /// derivative outputs use the same layout.
  void evaluate(const Eigen::Matrix<double, Eigen::Dynamic, 2>& points,
                Eigen::MatrixXd* values, Eigen::MatrixXd* ddx = nullptr,
                Eigen::MatrixXd* ddy = nullptr) const;

  Eigen::MatrixXd values(const Eigen::Matrix<double, Eigen::Dynamic, 2>& points) const {
    Eigen::MatrixXd v;
    evaluate(points, &v);
    return v;
  }

 private:
  int degree_;
  int dim_;
};

/// L2-orthonormal shifted Legendre values on [0,1], degrees 0..degree.
Eigen::VectorXd legendre01(int degree, double t);

}  // namespace elastdg

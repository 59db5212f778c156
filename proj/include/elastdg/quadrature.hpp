#pragma once

#include <Eigen/Core>

#include "elastdg/types.hpp"

namespace elastdg {

/// Gauss rule on a reference domain. Triangle rules live on the reference
/// triangle with vertices (0,0), (1,0), (0,1); edge rules on [0,1].
/// Immutable value object, freely shared.
struct QuadratureRule {
  Eigen::Matrix<double, Eigen::Dynamic, 2> points;  // one row per point
  Eigen::VectorXd weights;
  int exactness_degree = 0;

  int size() const { return static_cast<int>(weights.size()); }
};

inline constexpr int kMaxQuadratureDegree = 61;

/// Collapsed (Duffy) Gauss-Legendre x Gauss-Jacobi rule on the reference
/// triangle, exact for polynomials of total degree <= `degree`.
QuadratureRule triangle_rule(int degree);

/// Gauss-Legendre rule on [0,1]; the second coordinate of each point is 0.
QuadratureRule edge_rule(int degree);

}  // namespace elastdg

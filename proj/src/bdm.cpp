#include "elastdg/bdm.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "elastdg/quadrature.hpp"

namespace elastdg {

NedelecBasis::NedelecBasis(int k)
    : k_(k), dim_(k * k - 1), p_part_(std::max(k - 2, 0)) {
  if (k < 1) throw ConfigError("Nedelec moment space needs k >= 1");
  if (k == 1) dim_ = 0;
}

void NedelecBasis::evaluate(const Eigen::Matrix<double, Eigen::Dynamic, 2>& points,
                            Eigen::MatrixXd* x, Eigen::MatrixXd* y) const {
  const int npts = static_cast<int>(points.rows());
  x->setZero(npts, dim_);
  y->setZero(npts, dim_);
  if (dim_ == 0) return;

  const int np = p_part_.dim();  // dim P_{k-2}
  Eigen::MatrixXd phi;
  p_part_.evaluate(points, &phi);
  x->leftCols(np) = phi;
  y->middleCols(np, np) = phi;

  // Homogeneous part: q_a(x,y) * (-y, x) with q_a of degree m = k-2. For
  // conditioning at high degree, q_a is the scaled homogeneous Legendre
  // (x+y)^(m-a) S_a(x-y, x+y) instead of a plain monomial.
  const int m = k_ - 2;
  std::vector<double> S(m + 1);
  for (int p = 0; p < npts; ++p) {
    const double u = points(p, 0) - points(p, 1);
    const double w = points(p, 0) + points(p, 1);
    S[0] = 1.0;
    if (m >= 1) S[1] = u;
    for (int a = 1; a < m; ++a)
      S[a + 1] = ((2.0 * a + 1.0) * u * S[a] - a * w * w * S[a - 1]) / (a + 1.0);
    for (int a = 0; a <= m; ++a) {
      const double q = std::pow(w, m - a) * S[a];
      (*x)(p, 2 * np + a) = -q * points(p, 1);
      (*y)(p, 2 * np + a) = q * points(p, 0);
    }
  }
}

const std::array<ReferenceEdge, 3>& reference_edges() {
  static const std::array<ReferenceEdge, 3> edges = {{
      {{1, 0}, {0, 1}, {1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)}, std::sqrt(2.0)},
      {{0, 1}, {0, 0}, {-1, 0}, 1.0},
      {{0, 0}, {1, 0}, {0, -1}, 1.0},
  }};
  return edges;
}

BdmElement::BdmElement(int k)
    : k_(k), n_shape_((k + 1) * (k + 2)), scalar_(k), nedelec_(k) {
  if (k < 1) throw ConfigError("BDM degree must be >= 1");
  const int dim = scalar_.dim();

  // Component basis: p_j = (phi_j, 0) for j < dim, (0, phi_{j-dim}) after.
  Eigen::MatrixXd V = Eigen::MatrixXd::Zero(n_shape_, n_shape_);

  const QuadratureRule edge_q = edge_rule(2 * k_);
  const auto& edges = reference_edges();
  for (int e = 0; e < 3; ++e) {
    Eigen::Matrix<double, Eigen::Dynamic, 2> pts(edge_q.size(), 2);
    for (int q = 0; q < edge_q.size(); ++q) {
      const double t = edge_q.points(q, 0);
      pts.row(q) = ((1.0 - t) * edges[e].a + t * edges[e].b).transpose();
    }
    Eigen::MatrixXd phi;
    scalar_.evaluate(pts, &phi);
    for (int q = 0; q < edge_q.size(); ++q) {
      const double t = edge_q.points(q, 0);
      const Eigen::VectorXd leg = legendre01(k_, t);
      const double wq = edge_q.weights[q] * edges[e].length;
      for (int i = 0; i <= k_; ++i)
        for (int j = 0; j < dim; ++j) {
          V(edge_dof(e, i), j) += wq * leg[i] * phi(q, j) * edges[e].normal.x();
          V(edge_dof(e, i), dim + j) += wq * leg[i] * phi(q, j) * edges[e].normal.y();
        }
    }
  }

  if (nedelec_.dim() > 0) {
    const QuadratureRule vol_q = triangle_rule(2 * k_);
    Eigen::MatrixXd phi, nx, ny;
    scalar_.evaluate(vol_q.points, &phi);
    nedelec_.evaluate(vol_q.points, &nx, &ny);
    for (int m = 0; m < nedelec_.dim(); ++m)
      for (int j = 0; j < dim; ++j) {
        double vx = 0.0, vy = 0.0;
        for (int q = 0; q < vol_q.size(); ++q) {
          vx += vol_q.weights[q] * phi(q, j) * nx(q, m);
          vy += vol_q.weights[q] * phi(q, j) * ny(q, m);
        }
        V(interior_dof(m), j) = vx;
        V(interior_dof(m), dim + j) = vy;
      }
  }

  Eigen::PartialPivLU<Eigen::MatrixXd> lu(V);
  coeff_ = lu.solve(Eigen::MatrixXd::Identity(n_shape_, n_shape_));
  nodality_defect_ = (V * coeff_ - Eigen::MatrixXd::Identity(n_shape_, n_shape_))
                         .cwiseAbs()
                         .maxCoeff();
  if (!(nodality_defect_ <= 1e-10))
    throw StructuralError("BDM dof/shape matrix is numerically singular (k=" +
                          std::to_string(k_) + ")");
}

BdmElement::Values BdmElement::evaluate(
    const Eigen::Matrix<double, Eigen::Dynamic, 2>& points) const {
  const int dim = scalar_.dim();
  Eigen::MatrixXd phi, gx, gy;
  scalar_.evaluate(points, &phi, &gx, &gy);
  Values v;
  v.x = phi * coeff_.topRows(dim);
  v.y = phi * coeff_.bottomRows(dim);
  v.div = gx * coeff_.topRows(dim) + gy * coeff_.bottomRows(dim);
  return v;
}

Eigen::VectorXd BdmElement::dofs_of(const std::function<Vec2(const Vec2&)>& v,
                                    int edge_quad_degree,
                                    int volume_quad_degree) const {
  Eigen::VectorXd dofs = Eigen::VectorXd::Zero(n_shape_);
  const QuadratureRule edge_q = edge_rule(edge_quad_degree);
  const auto& edges = reference_edges();
  for (int e = 0; e < 3; ++e) {
    for (int q = 0; q < edge_q.size(); ++q) {
      const double t = edge_q.points(q, 0);
      const Vec2 x = (1.0 - t) * edges[e].a + t * edges[e].b;
      const double vn = v(x).dot(edges[e].normal);
      const Eigen::VectorXd leg = legendre01(k_, t);
      const double wq = edge_q.weights[q] * edges[e].length;
      for (int i = 0; i <= k_; ++i) dofs[edge_dof(e, i)] += wq * vn * leg[i];
    }
  }
  dofs.tail(n_interior_dofs()) = interior_moments(v, volume_quad_degree);
  return dofs;
}

Eigen::VectorXd BdmElement::interior_moments(
    const std::function<Vec2(const Vec2&)>& v, int volume_quad_degree) const {
  Eigen::VectorXd m = Eigen::VectorXd::Zero(nedelec_.dim());
  if (nedelec_.dim() == 0) return m;
  const QuadratureRule vol_q = triangle_rule(volume_quad_degree);
  Eigen::MatrixXd nx, ny;
  nedelec_.evaluate(vol_q.points, &nx, &ny);
  for (int q = 0; q < vol_q.size(); ++q) {
    const Vec2 val = v(vol_q.points.row(q).transpose());
    for (int i = 0; i < nedelec_.dim(); ++i)
      m[i] += vol_q.weights[q] * (val.x() * nx(q, i) + val.y() * ny(q, i));
  }
  return m;
}

}  // namespace elastdg

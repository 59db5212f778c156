#include "elastdg/spaces.hpp"

#include <cmath>

#include "elastdg/quadrature.hpp"

namespace elastdg {

DofMap build_dofmap(const Mesh& mesh, int k, Scheme scheme) {
  if (k < 1) throw ConfigError("polynomial degree must be >= 1");
  DofMap map;
  map.scheme = scheme;
  map.k = k;
  map.rot_dim = poly_space_dim(k - 1);
  map.n_rotation = mesh.n_cells() * map.rot_dim;

  if (scheme == Scheme::DG) {
    const int dim = poly_space_dim(k);
    map.stress_per_cell = 4 * dim;
    map.n_stress = mesh.n_cells() * map.stress_per_cell;
    map.cell_stress.resize(static_cast<std::size_t>(mesh.n_cells()) * map.stress_per_cell);
    for (int c = 0; c < mesh.n_cells(); ++c)
      for (int j = 0; j < map.stress_per_cell; ++j)
        map.cell_stress[static_cast<std::size_t>(c) * map.stress_per_cell + j] =
            c * map.stress_per_cell + j;
    return map;
  }

  const int edge_block = k + 1;
  const int int_block = k * k - 1;
  const int n_shape = (k + 1) * (k + 2);
  map.row_stride = mesh.n_faces() * edge_block + mesh.n_cells() * int_block;
  map.n_stress = 2 * map.row_stride;
  map.stress_per_cell = 2 * n_shape;
  map.cell_stress.resize(static_cast<std::size_t>(mesh.n_cells()) * map.stress_per_cell);
  map.cell_sign.resize(map.cell_stress.size());

  for (int c = 0; c < mesh.n_cells(); ++c) {
    const std::size_t base = static_cast<std::size_t>(c) * map.stress_per_cell;
    for (int row = 0; row < 2; ++row) {
      const int row_off = row * map.row_stride;
      std::size_t local = base + static_cast<std::size_t>(row) * n_shape;
      for (int e = 0; e < 3; ++e) {
        const EdgeOrientation eo = mesh.edge_orientation(c, e);
        for (int i = 0; i <= k; ++i) {
          // Legendre parity: flipping the edge parameter multiplies the
          // i-th moment by (-1)^i.
          const double parity = (eo.flipped && (i % 2 == 1)) ? -1.0 : 1.0;
          map.cell_stress[local] = row_off + eo.face * edge_block + i;
          map.cell_sign[local] = eo.normal_sign * parity;
          ++local;
        }
      }
      for (int j = 0; j < int_block; ++j) {
        map.cell_stress[local] =
            row_off + mesh.n_faces() * edge_block + c * int_block + j;
        map.cell_sign[local] = 1.0;
        ++local;
      }
    }
  }

  for (int f = 0; f < mesh.n_faces(); ++f) {
    if (mesh.faces[f].tag != FaceTag::SigmaBoundary) continue;
    for (int row = 0; row < 2; ++row)
      for (int i = 0; i <= k; ++i)
        map.constrained.push_back(row * map.row_stride + f * edge_block + i);
  }
  return map;
}

Eigen::VectorXd bdm_interpolate(const Mesh& mesh, const BdmElement& element,
                                const std::function<Vec2(const Vec2&)>& v,
                                int quad_degree) {
  const int k = element.degree();
  const int edge_block = k + 1;
  const int int_block = element.n_interior_dofs();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(
      mesh.n_faces() * edge_block + mesh.n_cells() * int_block);

  const QuadratureRule eq = edge_rule(quad_degree);
  for (int f = 0; f < mesh.n_faces(); ++f) {
    const Face& face = mesh.faces[f];
    for (int q = 0; q < eq.size(); ++q) {
      const double t = eq.points(q, 0);
      const double vn = v(mesh.face_point(f, t)).dot(face.normal);
      const Eigen::VectorXd leg = legendre01(k, t);
      const double wq = eq.weights[q] * face.length;
      for (int i = 0; i <= k; ++i) out[f * edge_block + i] += wq * vn * leg[i];
    }
  }

  if (int_block > 0) {
    for (int c = 0; c < mesh.n_cells(); ++c) {
      const CellGeometry g = mesh.cell_geometry(c);
      const Mat2 Binv = g.B.inverse();
      auto pullback = [&](const Vec2& xref) -> Vec2 {
        return g.det * (Binv * v(g.map(xref)));
      };
      out.segment(mesh.n_faces() * edge_block + c * int_block, int_block) =
          element.interior_moments(pullback, quad_degree);
    }
  }
  return out;
}

Eigen::VectorXd l2_project_scalar(const Mesh& mesh, int degree,
                                  const std::function<double(const Vec2&)>& f,
                                  int quad_degree) {
  const ScalarBasis basis(degree);
  const QuadratureRule rule = triangle_rule(quad_degree);
  Eigen::MatrixXd phi;
  basis.evaluate(rule.points, &phi);

  Eigen::VectorXd out = Eigen::VectorXd::Zero(mesh.n_cells() * basis.dim());
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const CellGeometry g = mesh.cell_geometry(c);
    // The reference basis is orthonormal and the map is affine, so the
    // cell Jacobian cancels between mass matrix and load vector.
    for (int q = 0; q < rule.size(); ++q) {
      const double fw = rule.weights[q] * f(g.map(rule.points.row(q).transpose()));
      for (int i = 0; i < basis.dim(); ++i)
        out[c * basis.dim() + i] += fw * phi(q, i);
    }
  }
  return out;
}

BdmCellEvaluator::BdmCellEvaluator(
    const BdmElement& element,
    const Eigen::Matrix<double, Eigen::Dynamic, 2>& ref_points)
    : element_(&element), ref_(element.evaluate(ref_points)) {}

void BdmCellEvaluator::evaluate(const Mesh& mesh, const DofMap& map,
                                const Eigen::VectorXd& field, int cell,
                                Eigen::MatrixX2d* values,
                                Eigen::VectorXd* divergence) const {
  const int n_shape = element_->n_shape();
  const int* ids = map.stress_indices(cell);
  const double* signs = map.stress_signs(cell);
  Eigen::VectorXd local(n_shape);
  for (int j = 0; j < n_shape; ++j)
    local[j] = (signs ? signs[j] : 1.0) * field[ids[j]];

  const CellGeometry g = mesh.cell_geometry(cell);
  const Eigen::VectorXd vx = ref_.x * local;
  const Eigen::VectorXd vy = ref_.y * local;
  if (values) {
    values->resize(vx.size(), 2);
    values->col(0) = (g.B(0, 0) * vx + g.B(0, 1) * vy) / g.det;
    values->col(1) = (g.B(1, 0) * vx + g.B(1, 1) * vy) / g.det;
  }
  if (divergence) *divergence = (ref_.div * local) / g.det;
}

void eval_bdm_field(const Mesh& mesh, const BdmElement& element,
                    const DofMap& map, const Eigen::VectorXd& field, int cell,
                    const Eigen::Matrix<double, Eigen::Dynamic, 2>& ref_points,
                    Eigen::MatrixX2d* values, Eigen::VectorXd* divergence) {
  BdmCellEvaluator(element, ref_points)
      .evaluate(mesh, map, field, cell, values, divergence);
}

Eigen::VectorXd eval_cellwise_scalar(
    const ScalarBasis& basis, const Eigen::VectorXd& coeffs, int cell,
    const Eigen::Matrix<double, Eigen::Dynamic, 2>& ref_points) {
  Eigen::MatrixXd phi;
  basis.evaluate(ref_points, &phi);
  return phi * coeffs.segment(cell * basis.dim(), basis.dim());
}

}  // namespace elastdg

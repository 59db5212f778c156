#include "elastdg/errors.hpp"

#include <cmath>

#include "elastdg/quadrature.hpp"

namespace elastdg {

namespace {

using PointsMat = Eigen::Matrix<double, Eigen::Dynamic, 2>;

struct CellStress {
  Eigen::VectorXd s11, s12, s21, s22;  // tensor components at points
  Eigen::VectorXd div1, div2;          // row divergences
};

// Evaluates a discrete stress field of either scheme cell by cell.
// prepare() fixes the reference points; eval() gathers one cell.
class StressFieldEval {
 public:
  StressFieldEval(const Mesh& mesh, const DofMap& map, const Eigen::VectorXd& stress)
      : mesh_(mesh), map_(map), stress_(stress) {
    if (map.scheme == Scheme::CG)
      element_.emplace(map.k);
    else
      basis_.emplace(map.k);
  }

  void prepare(const PointsMat& pts, bool want_div) {
    want_div_ = want_div;
    if (map_.scheme == Scheme::CG) {
      ref_ = element_->evaluate(pts);
    } else {
      basis_->evaluate(pts, &phi_, want_div ? &gx_ : nullptr,
                       want_div ? &gy_ : nullptr);
    }
  }

  CellStress eval(int cell) const {
    CellStress out;
    const CellGeometry g = mesh_.cell_geometry(cell);
    if (map_.scheme == Scheme::CG) {
      const int ns = element_->n_shape();
      const int* ids = map_.stress_indices(cell);
      const double* sg = map_.stress_signs(cell);
      Eigen::VectorXd c0(ns), c1(ns);
      for (int j = 0; j < ns; ++j) {
        c0[j] = sg[j] * stress_[ids[j]];
        c1[j] = sg[ns + j] * stress_[ids[ns + j]];
      }
      const Eigen::VectorXd vx0 = ref_.x * c0, vy0 = ref_.y * c0;
      const Eigen::VectorXd vx1 = ref_.x * c1, vy1 = ref_.y * c1;
      out.s11 = (g.B(0, 0) * vx0 + g.B(0, 1) * vy0) / g.det;
      out.s12 = (g.B(1, 0) * vx0 + g.B(1, 1) * vy0) / g.det;
      out.s21 = (g.B(0, 0) * vx1 + g.B(0, 1) * vy1) / g.det;
      out.s22 = (g.B(1, 0) * vx1 + g.B(1, 1) * vy1) / g.det;
      if (want_div_) {
        out.div1 = ref_.div * c0 / g.det;
        out.div2 = ref_.div * c1 / g.det;
      }
    } else {
      const int dim = basis_->dim();
      const int base = cell * map_.stress_per_cell;
      const auto comp = [&](int rc) {
        return stress_.segment(base + rc * dim, dim);
      };
      out.s11 = phi_ * comp(0);
      out.s12 = phi_ * comp(1);
      out.s21 = phi_ * comp(2);
      out.s22 = phi_ * comp(3);
      if (want_div_) {
        const Mat2 BinvT = g.B.inverse().transpose();
        const Eigen::MatrixXd gxp = BinvT(0, 0) * gx_ + BinvT(0, 1) * gy_;
        const Eigen::MatrixXd gyp = BinvT(1, 0) * gx_ + BinvT(1, 1) * gy_;
        out.div1 = gxp * comp(0) + gyp * comp(1);
        out.div2 = gxp * comp(2) + gyp * comp(3);
      }
    }
    return out;
  }

 private:
  const Mesh& mesh_;
  const DofMap& map_;
  const Eigen::VectorXd& stress_;
  std::optional<BdmElement> element_;
  std::optional<ScalarBasis> basis_;
  BdmElement::Values ref_;
  Eigen::MatrixXd phi_, gx_, gy_;
  bool want_div_ = false;
};

PointsMat face_ref_points(const FaceTrace& tr, const QuadratureRule& rule) {
  PointsMat pts(rule.size(), 2);
  for (int q = 0; q < rule.size(); ++q)
    pts.row(q) = tr.ref_point(rule.points(q, 0)).transpose();
  return pts;
}

}  // namespace

double ErrorBreakdown::total() const {
  return std::sqrt(l2 * l2 + div * div + jump * jump);
}

ErrorReport measure_errors(const Mesh& mesh, const DofMap& map,
                           const DiscreteSolution& sol,
                           const ManufacturedSolution& ms, int quad_bump) {
  const int k = map.k;
  const int deg = 2 * k + 6 + quad_bump;
  const QuadratureRule vq = triangle_rule(deg);
  const ScalarBasis rot_basis(k - 1);
  Eigen::MatrixXd rot_phi;
  rot_basis.evaluate(vq.points, &rot_phi);

  StressFieldEval stress_eval(mesh, map, sol.stress);
  stress_eval.prepare(vq.points, /*want_div=*/true);

  double num_l2 = 0, num_div = 0, den_l2 = 0, den_div = 0;
  double num_rot = 0, den_rot = 0;

  for (int c = 0; c < mesh.n_cells(); ++c) {
    const CellGeometry g = mesh.cell_geometry(c);
    const CellStress sh = stress_eval.eval(c);
    const Eigen::VectorXd rh =
        rot_phi * sol.rotation.segment(c * rot_basis.dim(), rot_basis.dim());
    for (int q = 0; q < vq.size(); ++q) {
      const double w = vq.weights[q] * g.det;
      const Vec2 x = g.map(vq.points.row(q).transpose());
      const Mat2 sig = ms.sigma(x);
      const Vec2 dsig = ms.div_sigma(x);
      const double rot = ms.rotation(x);

      const double e11 = sig(0, 0) - sh.s11[q], e12 = sig(0, 1) - sh.s12[q];
      const double e21 = sig(1, 0) - sh.s21[q], e22 = sig(1, 1) - sh.s22[q];
      num_l2 += w * (e11 * e11 + e12 * e12 + e21 * e21 + e22 * e22);
      den_l2 += w * sig.squaredNorm();
      const double d1 = dsig.x() - sh.div1[q], d2 = dsig.y() - sh.div2[q];
      num_div += w * (d1 * d1 + d2 * d2);
      den_div += w * dsig.squaredNorm();
      const double er = rot - rh[q];
      num_rot += w * er * er;
      den_rot += w * rot * rot;
    }
  }

  // DG: scaled normal-jump part of the broken norm over F*. The exact
  // stress has no interior jumps, and on Sigma faces its contribution is
  // evaluated literally as (sigma - sigma_h) n.
  double num_jump = 0;
  if (map.scheme == Scheme::DG) {
    const QuadratureRule eq = edge_rule(deg);
    StressFieldEval trace_eval(mesh, map, sol.stress);
    for (int f = 0; f < mesh.n_faces(); ++f) {
      const Face& face = mesh.faces[f];
      if (face.tag == FaceTag::GammaBoundary) continue;
      double acc = 0;
      if (face.tag == FaceTag::Interior) {
        const FaceTrace t0 = face_quadrature_trace(mesh, f, FaceSide::first);
        const FaceTrace t1 = face_quadrature_trace(mesh, f, FaceSide::second);
        trace_eval.prepare(face_ref_points(t0, eq), false);
        const CellStress a = trace_eval.eval(t0.cell);
        trace_eval.prepare(face_ref_points(t1, eq), false);
        const CellStress b = trace_eval.eval(t1.cell);
        for (int q = 0; q < eq.size(); ++q) {
          const Vec2 n = face.normal;
          const Vec2 jump(
              (a.s11[q] - b.s11[q]) * n.x() + (a.s12[q] - b.s12[q]) * n.y(),
              (a.s21[q] - b.s21[q]) * n.x() + (a.s22[q] - b.s22[q]) * n.y());
          acc += eq.weights[q] * jump.squaredNorm();
        }
      } else {  // Sigma
        const FaceTrace t0 = face_quadrature_trace(mesh, f, FaceSide::first);
        trace_eval.prepare(face_ref_points(t0, eq), false);
        const CellStress a = trace_eval.eval(t0.cell);
        for (int q = 0; q < eq.size(); ++q) {
          const Mat2 sig = ms.sigma(mesh.face_point(f, eq.points(q, 0)));
          const Vec2 n = face.normal;
          const Vec2 jump((sig(0, 0) - a.s11[q]) * n.x() + (sig(0, 1) - a.s12[q]) * n.y(),
                          (sig(1, 0) - a.s21[q]) * n.x() + (sig(1, 1) - a.s22[q]) * n.y());
          acc += eq.weights[q] * jump.squaredNorm();
        }
      }
      num_jump += acc;  // the |F| measure and h_F^{-1} weight cancel
    }
  }

  ErrorReport rep;
  rep.sigma_parts.l2 = std::sqrt(num_l2);
  rep.sigma_parts.div = std::sqrt(num_div);
  rep.sigma_parts.jump = std::sqrt(num_jump);
  rep.norm_sigma_hdiv = std::sqrt(den_l2 + den_div);
  rep.norm_rotation = std::sqrt(den_rot);
  rep.err_sigma = rep.sigma_parts.total() / rep.norm_sigma_hdiv;
  rep.err_rotation = std::sqrt(num_rot) / rep.norm_rotation;
  return rep;
}

double dg_jump_seminorm(const Mesh& mesh, const DofMap& map,
                        const Eigen::VectorXd& stress, int quad_bump) {
  const QuadratureRule eq = edge_rule(2 * map.k + 6 + quad_bump);
  StressFieldEval trace_eval(mesh, map, stress);
  double total = 0;
  for (int f = 0; f < mesh.n_faces(); ++f) {
    const Face& face = mesh.faces[f];
    if (face.tag == FaceTag::GammaBoundary) continue;
    const FaceTrace t0 = face_quadrature_trace(mesh, f, FaceSide::first);
    trace_eval.prepare(face_ref_points(t0, eq), false);
    const CellStress a = trace_eval.eval(t0.cell);
    CellStress b;
    const bool interior = face.tag == FaceTag::Interior;
    if (interior) {
      const FaceTrace t1 = face_quadrature_trace(mesh, f, FaceSide::second);
      trace_eval.prepare(face_ref_points(t1, eq), false);
      b = trace_eval.eval(t1.cell);
    }
    double acc = 0;
    for (int q = 0; q < eq.size(); ++q) {
      const Vec2 n = face.normal;
      Vec2 jump(a.s11[q] * n.x() + a.s12[q] * n.y(),
                a.s21[q] * n.x() + a.s22[q] * n.y());
      if (interior)
        jump -= Vec2(b.s11[q] * n.x() + b.s12[q] * n.y(),
                     b.s21[q] * n.x() + b.s22[q] * n.y());
      acc += eq.weights[q] * jump.squaredNorm();
    }
    total += acc;  // |F| / h_F = 1
  }
  return std::sqrt(total);
}

double weak_symmetry_residual(const Mesh& mesh, const DofMap& map,
                              const Eigen::VectorXd& stress, int quad_bump) {
  const int deg = 2 * map.k + 6 + quad_bump;
  const QuadratureRule vq = triangle_rule(deg);
  const ScalarBasis rot_basis(map.k - 1);
  Eigen::MatrixXd rot_phi;
  rot_basis.evaluate(vq.points, &rot_phi);

  StressFieldEval stress_eval(mesh, map, stress);
  stress_eval.prepare(vq.points, false);

  double stress_norm_sq = 0;
  double worst = 0;
  std::vector<double> norm_per_cell(mesh.n_cells());
  std::vector<Eigen::VectorXd> moments(mesh.n_cells());
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const CellGeometry g = mesh.cell_geometry(c);
    const CellStress sh = stress_eval.eval(c);
    Eigen::VectorXd m = Eigen::VectorXd::Zero(rot_basis.dim());
    for (int q = 0; q < vq.size(); ++q) {
      const double w = vq.weights[q] * g.det;
      stress_norm_sq += w * (sh.s11[q] * sh.s11[q] + sh.s12[q] * sh.s12[q] +
                             sh.s21[q] * sh.s21[q] + sh.s22[q] * sh.s22[q]);
      // sigma : skew(rho) = rho (sigma21 - sigma12)
      const double skew_part = sh.s21[q] - sh.s12[q];
      for (int i = 0; i < rot_basis.dim(); ++i)
        m[i] += w * skew_part * rot_phi(q, i);
    }
    moments[c] = m;
    norm_per_cell[c] = std::sqrt(2.0 * g.det);  // ||skew(rho_i)||_0
  }
  const double stress_norm = std::sqrt(stress_norm_sq);
  for (int c = 0; c < mesh.n_cells(); ++c)
    for (int i = 0; i < moments[c].size(); ++i)
      worst = std::max(worst,
                       std::abs(moments[c][i]) / (stress_norm * norm_per_cell[c]));
  return worst;
}

std::vector<std::optional<double>> convergence_rates(
    const std::vector<std::pair<double, double>>& h_and_error) {
  if (h_and_error.size() < 2)
    throw DomainError("need at least two rows to compute rates");
  std::vector<std::optional<double>> rates(h_and_error.size());
  for (std::size_t i = 0; i < h_and_error.size(); ++i) {
    if (!(h_and_error[i].second > 0))
      throw DomainError("nonpositive error in rate computation");
    if (i == 0) continue;
    if (!(h_and_error[i].first < h_and_error[i - 1].first))
      throw DomainError("mesh sizes must be strictly decreasing");
    rates[i] = std::log(h_and_error[i - 1].second / h_and_error[i].second) /
               std::log(h_and_error[i - 1].first / h_and_error[i].first);
  }
  return rates;
}

}  // namespace elastdg

#include <doctest.h>

#include <cmath>
#include <random>

#include "elastdg/quadrature.hpp"
#include "elastdg/model.hpp"
#include "elastdg/spaces.hpp"

using namespace elastdg;

namespace {

// L2 and divergence-L2 errors of a BDM coefficient vector against a field.
std::pair<double, double> interpolation_error(
    const Mesh& mesh, const BdmElement& element, const DofMap& map,
    const Eigen::VectorXd& coeffs, const std::function<Vec2(const Vec2&)>& v,
    const std::function<double(const Vec2&)>& div_v) {
  const QuadratureRule rule = triangle_rule(2 * element.degree() + 8);
  const BdmCellEvaluator eval(element, rule.points);
  double el2 = 0, ediv = 0;
  for (int c = 0; c < mesh.n_cells(); ++c) {
    Eigen::MatrixX2d vals;
    Eigen::VectorXd div;
    eval.evaluate(mesh, map, coeffs, c, &vals, &div);
    const CellGeometry g = mesh.cell_geometry(c);
    for (int q = 0; q < rule.size(); ++q) {
      const Vec2 x = g.map(rule.points.row(q).transpose());
      const double w = rule.weights[q] * g.det;
      el2 += w * (v(x) - Vec2(vals(q, 0), vals(q, 1))).squaredNorm();
      const double dd = div_v(x) - div[q];
      ediv += w * dd * dd;
    }
  }
  return {std::sqrt(el2), std::sqrt(ediv)};
}

}  // namespace

TEST_CASE("dof map counts") {
  const Mesh m1 = build_structured_mesh(1);

  const DofMap dg = build_dofmap(m1, 2, Scheme::DG);
  CHECK(dg.n_stress == 48);
  CHECK(dg.n_rotation == 6);

  const DofMap cg = build_dofmap(m1, 1, Scheme::CG);
  CHECK(cg.n_stress == 20);
  CHECK(cg.row_stride == 10);
  CHECK(cg.n_rotation == 2);
  CHECK(cg.constrained.empty());  // Gamma = whole boundary by default

  SigmaTagging tag;
  tag.left = true;
  const Mesh m3 = build_structured_mesh(3, tag);
  const DofMap cgs = build_dofmap(m3, 2, Scheme::CG);
  CHECK(cgs.constrained.size() == 2u * 3u * 3u);  // 2 rows x 3 edges x (k+1)
}

TEST_CASE("CG normal traces are continuous across interior faces") {
  const int k = 3;
  const Mesh mesh = build_structured_mesh(3);
  const BdmElement element(k);
  const DofMap map = build_dofmap(mesh, k, Scheme::CG);

  std::mt19937 rng(5);
  std::normal_distribution<double> dist;
  Eigen::VectorXd field(map.row_stride);
  for (int i = 0; i < field.size(); ++i) field[i] = dist(rng);

  const QuadratureRule rule = edge_rule(2 * k + 2);
  double worst = 0;
  for (int f = 0; f < mesh.n_faces(); ++f) {
    const Face& face = mesh.faces[f];
    if (face.is_boundary()) continue;
    std::array<Eigen::VectorXd, 2> vn;
    for (int side = 0; side < 2; ++side) {
      const FaceTrace tr = face_quadrature_trace(
          mesh, f, side == 0 ? FaceSide::first : FaceSide::second);
      Eigen::Matrix<double, Eigen::Dynamic, 2> ref(rule.size(), 2);
      for (int q = 0; q < rule.size(); ++q)
        ref.row(q) = tr.ref_point(rule.points(q, 0)).transpose();
      Eigen::MatrixX2d vals;
      eval_bdm_field(mesh, element, map, field, tr.cell, ref, &vals, nullptr);
      vn[side] = vals * face.normal;
    }
    worst = std::max(worst, (vn[0] - vn[1]).cwiseAbs().maxCoeff());
  }
  CHECK(worst <= 1e-11);
}

TEST_CASE("interpolation reproduces polynomial fields") {
  for (int k : {1, 2, 3}) {
    const Mesh mesh = build_structured_mesh(2);
    const BdmElement element(k);
    const DofMap map = build_dofmap(mesh, k, Scheme::CG);
    auto v = [k](const Vec2& x) {
      return Vec2(std::pow(x.x() + 0.5 * x.y(), k),
                  std::pow(0.3 * x.x() - x.y(), k) - 1.0);
    };
    const Eigen::VectorXd coeffs = bdm_interpolate(mesh, element, v, 2 * k + 8);
    Eigen::Matrix<double, Eigen::Dynamic, 2> pts(2, 2);
    pts << 0.31, 0.4, 0.1, 0.22;
    for (int c = 0; c < mesh.n_cells(); ++c) {
      Eigen::MatrixX2d vals;
      eval_bdm_field(mesh, element, map, coeffs, c, pts, &vals, nullptr);
      const CellGeometry g = mesh.cell_geometry(c);
      for (int q = 0; q < pts.rows(); ++q) {
        const Vec2 expect = v(g.map(pts.row(q).transpose()));
        CHECK((Vec2(vals(q, 0), vals(q, 1)) - expect).norm() <= 1e-10);
      }
    }
  }
}

TEST_CASE("divergence-free field stays divergence-free after interpolation") {
  const int k = 2;
  const Mesh mesh = build_structured_mesh(3);
  const BdmElement element(k);
  const DofMap map = build_dofmap(mesh, k, Scheme::CG);
  auto v = [](const Vec2& x) { return Vec2(std::sin(x.y()), 0.0); };
  const Eigen::VectorXd coeffs = bdm_interpolate(mesh, element, v, 2 * k + 8);
  const QuadratureRule rule = triangle_rule(2 * k);
  const BdmCellEvaluator eval(element, rule.points);
  for (int c = 0; c < mesh.n_cells(); ++c) {
    Eigen::VectorXd div;
    eval.evaluate(mesh, map, coeffs, c, nullptr, &div);
    CHECK(div.cwiseAbs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("commuting diagram: div of interpolant equals projected divergence") {
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> unif(-1, 1);
  for (int k : {1, 2, 3}) {
    for (int n : {2, 4}) {
      const Mesh mesh = build_structured_mesh(n);
      const BdmElement element(k);
      const DofMap map = build_dofmap(mesh, k, Scheme::CG);
      const double a1 = unif(rng), a2 = unif(rng), b1 = unif(rng), b2 = unif(rng);
      auto v = [&](const Vec2& x) {
        return Vec2(std::sin(2 * x.x() + a1) * std::cos(x.y() + a2),
                    x.x() * x.y() + std::cos(2 * x.y() + b1) * b2);
      };
      auto div_v = [&](const Vec2& x) {
        return 2 * std::cos(2 * x.x() + a1) * std::cos(x.y() + a2) + x.x() -
               2 * std::sin(2 * x.y() + b1) * b2;
      };
      const Eigen::VectorXd coeffs = bdm_interpolate(mesh, element, v, 2 * k + 10);
      const Eigen::VectorXd proj =
          l2_project_scalar(mesh, k - 1, div_v, 2 * k + 10);

      const QuadratureRule rule = triangle_rule(2 * k + 4);
      const BdmCellEvaluator eval(element, rule.points);
      const ScalarBasis scalar(k - 1);
      double worst = 0;
      for (int c = 0; c < mesh.n_cells(); ++c) {
        Eigen::VectorXd div;
        eval.evaluate(mesh, map, coeffs, c, nullptr, &div);
        const Eigen::VectorXd pr = eval_cellwise_scalar(scalar, proj, c, rule.points);
        worst = std::max(worst, (div - pr).cwiseAbs().maxCoeff());
      }
      CHECK(worst <= 1e-10);
    }
  }
}

TEST_CASE("L2 projection basics") {
  const Mesh mesh = build_structured_mesh(1);

  // P_{k-1} data is reproduced exactly.
  auto f = [](const Vec2& x) { return 2.0 * x.x() - 3.0 * x.y() + 0.25; };
  const Eigen::VectorXd proj = l2_project_scalar(mesh, 1, f, 8);
  const ScalarBasis basis(1);
  Eigen::Matrix<double, Eigen::Dynamic, 2> pts(3, 2);
  pts << 0.2, 0.2, 0.5, 0.25, 0.05, 0.6;
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const CellGeometry g = mesh.cell_geometry(c);
    const Eigen::VectorXd vals = eval_cellwise_scalar(basis, proj, c, pts);
    for (int q = 0; q < pts.rows(); ++q)
      CHECK(vals[q] == doctest::Approx(f(g.map(pts.row(q).transpose()))).epsilon(1e-13));
  }

  // Degree-0 projection is the cell average.
  auto f2 = [](const Vec2& x) { return x.x() * x.x(); };
  const Eigen::VectorXd avg = l2_project_scalar(mesh, 0, f2, 8);
  const QuadratureRule rule = triangle_rule(8);
  const ScalarBasis p0(0);
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const CellGeometry g = mesh.cell_geometry(c);
    double mean = 0;
    for (int q = 0; q < rule.size(); ++q)
      mean += rule.weights[q] * g.det * f2(g.map(rule.points.row(q).transpose()));
    mean /= g.det / 2.0 * 1.0;  // cell area = det/2
    const Eigen::VectorXd vals = eval_cellwise_scalar(p0, avg, c, pts.topRows(1));
    CHECK(vals[0] == doctest::Approx(mean).epsilon(1e-13));
  }

  // Galerkin orthogonality of the residual.
  const int k1 = 2;
  auto f3 = [](const Vec2& x) { return std::sin(3 * x.x()) * x.y(); };
  const Eigen::VectorXd p3 = l2_project_scalar(mesh, k1, f3, 2 * k1 + 10);
  const ScalarBasis b3(k1);
  const QuadratureRule r3 = triangle_rule(2 * k1 + 10);
  Eigen::MatrixXd phi;
  b3.evaluate(r3.points, &phi);
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const CellGeometry g = mesh.cell_geometry(c);
    const Eigen::VectorXd vals = eval_cellwise_scalar(b3, p3, c, r3.points);
    Eigen::VectorXd moments = Eigen::VectorXd::Zero(b3.dim());
    for (int q = 0; q < r3.size(); ++q) {
      const double resid =
          f3(g.map(r3.points.row(q).transpose())) - vals[q];
      moments += r3.weights[q] * g.det * resid * phi.row(q).transpose();
    }
    CHECK(moments.cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("interpolation converges at the expected orders") {
  const int k = 2;
  const LameParams params{1.0, 1.0};
  const ManufacturedSolution ms = exact_fields(WaveNumber(4.0), params);
  auto row0 = [&](const Vec2& x) {
    const Mat2 s = ms.sigma(x);
    return Vec2(s(0, 0), s(0, 1));
  };
  auto div_row0 = [&](const Vec2& x) { return ms.div_sigma(x).x(); };

  double prev_l2 = 0, prev_div = 0;
  for (int n : {8, 16}) {
    const Mesh mesh = build_structured_mesh(n);
    const BdmElement element(k);
    const DofMap map = build_dofmap(mesh, k, Scheme::CG);
    const Eigen::VectorXd coeffs = bdm_interpolate(mesh, element, row0, 2 * k + 8);
    const auto [el2, ediv] =
        interpolation_error(mesh, element, map, coeffs, row0, div_row0);
    if (n == 16) {
      CHECK(prev_l2 / el2 == doctest::Approx(std::pow(2.0, k + 1)).epsilon(0.15));
      CHECK(prev_div / ediv == doctest::Approx(std::pow(2.0, k)).epsilon(0.15));
    }
    prev_l2 = el2;
    prev_div = ediv;
  }
}

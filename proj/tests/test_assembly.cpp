#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <random>

#include "elastdg/assembly.hpp"
#include "elastdg/quadrature.hpp"

using namespace elastdg;

namespace {

double symmetry_defect(const Eigen::SparseMatrix<double>& M) {
  const Eigen::SparseMatrix<double> D = Eigen::SparseMatrix<double>(M.transpose()) - M;
  double dmax = 0, mmax = 0;
  for (int c = 0; c < D.outerSize(); ++c)
    for (Eigen::SparseMatrix<double>::InnerIterator it(D, c); it; ++it)
      dmax = std::max(dmax, std::abs(it.value()));
  for (int c = 0; c < M.outerSize(); ++c)
    for (Eigen::SparseMatrix<double>::InnerIterator it(M, c); it; ++it)
      mmax = std::max(mmax, std::abs(it.value()));
  return dmax / mmax;
}

double rotation_block_max(const SparseSystem& sys) {
  double worst = 0;
  const auto& M = sys.matrix;
  for (int c = sys.n_stress; c < sys.full_size(); ++c)
    for (Eigen::SparseMatrix<double>::InnerIterator it(M, c); it; ++it)
      if (it.row() >= sys.n_stress) worst = std::max(worst, std::abs(it.value()));
  return worst;
}

}  // namespace

TEST_CASE("assembled systems are symmetric with a zero rotation block") {
  const Mesh mesh = build_structured_mesh(3);
  const LameParams params{1.0, 1.0};
  const ManufacturedSolution ms = exact_fields(WaveNumber(4.0), params);

  const SparseSystem cg = assemble_cg(mesh, 2, params, WaveNumber(4.0), ms);
  CHECK(cg.n_stress == build_dofmap(mesh, 2, Scheme::CG).n_stress);
  CHECK(symmetry_defect(cg.matrix) <= 1e-12);
  CHECK(rotation_block_max(cg) == 0.0);
  CHECK(cg.rhs.size() == cg.full_size());
  CHECK(cg.rhs.tail(cg.n_rotation).cwiseAbs().maxCoeff() == 0.0);

  const SparseSystem dg = assemble_dg(mesh, 2, params, WaveNumber(4.0), 100.0, ms);
  CHECK(symmetry_defect(dg.matrix) <= 1e-12);
  CHECK(rotation_block_max(dg) == 0.0);

  CHECK_THROWS_AS(assemble_dg(mesh, 2, params, WaveNumber(4.0), 0.0, ms),
                  ConfigError);
  CHECK_THROWS_AS(assemble_dg(mesh, 2, params, WaveNumber(4.0), -5.0, ms),
                  ConfigError);
}

TEST_CASE("jump and average conventions") {
  std::vector<Mat2> same(3, (Mat2() << 1, 2, 3, 4).finished());
  const FaceOperatorSample a = eval_jump_average(same, same, Vec2(0, 1));
  for (int q = 0; q < 3; ++q) {
    CHECK(a.jump[q].norm() == 0.0);
    CHECK((a.mean[q] - same[q]).norm() == 0.0);
  }

  std::vector<Mat2> eye{Mat2::Identity()}, zero{Mat2::Zero()};
  const FaceOperatorSample b = eval_jump_average(eye, zero, Vec2(1, 0));
  CHECK((b.jump[0] - Vec2(1, 0)).norm() == 0.0);
  CHECK((b.mean[0] - 0.5 * Mat2::Identity()).norm() == 0.0);

  const FaceOperatorSample c = eval_jump_average(eye, {}, Vec2(0, -1));
  CHECK((c.jump[0] - Vec2(0, -1)).norm() == 0.0);
  CHECK((c.mean[0] - Mat2::Identity()).norm() == 0.0);

  std::vector<Mat2> two(2, Mat2::Zero());
  CHECK_THROWS_AS(eval_jump_average(eye, two, Vec2(1, 0)), StructuralError);
}

TEST_CASE("face terms vanish on normal-continuous coefficient vectors") {
  // Fill the DG space with a globally polynomial tensor field; its normal
  // traces are continuous, so the penalty part of the energy cannot see
  // the stabilization parameter.
  const int k = 2;
  const Mesh mesh = build_structured_mesh(2);
  const LameParams params{1.0, 1.0};
  const ManufacturedSolution ms = exact_fields(WaveNumber(2.0), params);
  const SparseSystem s1 = assemble_dg(mesh, k, params, WaveNumber(2.0), 10.0, ms);
  const SparseSystem s2 = assemble_dg(mesh, k, params, WaveNumber(2.0), 1e4, ms);

  const DofMap map = build_dofmap(mesh, k, Scheme::DG);
  auto comp = [](const Vec2& x, int rc) {
    switch (rc) {
      case 0: return 1.0 + x.x() * x.x() - 2 * x.y();
      case 1: return x.x() * x.y() + 0.5;
      case 2: return x.y() * x.y() - x.x();
      default: return 2.0 * x.x() + x.y();
    }
  };
  Eigen::VectorXd v = Eigen::VectorXd::Zero(map.total());
  for (int rc = 0; rc < 4; ++rc) {
    const Eigen::VectorXd proj = l2_project_scalar(
        mesh, k, [&](const Vec2& x) { return comp(x, rc); }, 2 * k + 4);
    const int dim = poly_space_dim(k);
    for (int c = 0; c < mesh.n_cells(); ++c)
      v.segment(c * map.stress_per_cell + rc * dim, dim) =
          proj.segment(c * dim, dim);
  }
  const double e1 = v.dot(s1.matrix * v);
  const double e2 = v.dot(s2.matrix * v);
  CHECK(e1 == doctest::Approx(e2).epsilon(1e-9));
}

TEST_CASE("discrete trace inequality constant") {
  // For constants the ratio h_K |dK| / |K| is exact: the structured cells
  // have legs 1/n and diameter sqrt(2)/n, giving 4 + 4 sqrt(2).
  const Mesh mesh = build_structured_mesh(2);
  const double expected = 4.0 + 4.0 * std::sqrt(2.0);
  CHECK(discrete_trace_ratio(mesh, 0, 3) == doctest::Approx(expected).epsilon(1e-12));

  // Affine scale invariance across refinements.
  const double r2 = discrete_trace_ratio(build_structured_mesh(2), 3, 100);
  const double r4 = discrete_trace_ratio(build_structured_mesh(4), 3, 100);
  CHECK(r2 == doctest::Approx(r4).epsilon(1e-12));

  // Growth with k stays below 10 (k+1)^2.
  for (int k = 1; k <= 7; ++k) {
    const double ratio = discrete_trace_ratio(mesh, k, 100);
    CHECK(ratio > expected - 1e-9);
    CHECK(ratio < 10.0 * (k + 1) * (k + 1));
  }
}

TEST_CASE("sigma constraints are eliminated symmetrically") {
  SigmaTagging tag;
  tag.right = true;
  const Mesh mesh = build_structured_mesh(2, tag);
  const LameParams params{1.0, 1.0};
  const ManufacturedSolution ms = exact_fields(WaveNumber(2.0), params);
  const SparseSystem sys = assemble_cg(mesh, 1, params, WaveNumber(2.0), ms);
  const DofMap map = build_dofmap(mesh, 1, Scheme::CG);
  CHECK(map.constrained.size() == 2u * 2u * 2u);
  CHECK(sys.reduced_size() == sys.full_size() - static_cast<int>(map.constrained.size()));
  CHECK(symmetry_defect(sys.matrix) <= 1e-12);
  CHECK(static_cast<int>(sys.kept.size()) == sys.reduced_size());
}

TEST_CASE("matrix market export") {
  const Mesh mesh = build_structured_mesh(1);
  const LameParams params{1.0, 1.0};
  const ManufacturedSolution ms = exact_fields(WaveNumber(2.0), params);
  const SparseSystem sys = assemble_cg(mesh, 1, params, WaveNumber(2.0), ms);
  const std::string path = "mm_export_test.mtx";
  write_matrix_market(sys, path);
  std::FILE* in = std::fopen(path.c_str(), "r");
  REQUIRE(in != nullptr);
  char header[128];
  REQUIRE(std::fgets(header, sizeof header, in) != nullptr);
  CHECK(std::string(header).find("coordinate real symmetric") != std::string::npos);
  int rows = 0, cols = 0;
  long nnz = 0;
  REQUIRE(std::fscanf(in, "%d %d %ld", &rows, &cols, &nnz) == 3);
  CHECK(rows == sys.reduced_size());
  CHECK(cols == sys.reduced_size());
  long count = 0;
  double r, c, val;
  while (std::fscanf(in, "%lf %lf %lf", &r, &c, &val) == 3) ++count;
  CHECK(count == nnz);
  std::fclose(in);
  std::remove(path.c_str());
}

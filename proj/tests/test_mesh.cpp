#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <set>

#include "elastdg/mesh.hpp"
#include "elastdg/quadrature.hpp"

using namespace elastdg;

TEST_CASE("structured mesh counts") {
  const Mesh m1 = build_structured_mesh(1);
  CHECK(m1.n_vertices() == 4);
  CHECK(m1.n_cells() == 2);
  CHECK(m1.n_faces() == 5);
  int interior = 0;
  for (const Face& f : m1.faces) interior += f.tag == FaceTag::Interior;
  CHECK(interior == 1);

  const Mesh m2 = build_structured_mesh(2);
  CHECK(m2.n_vertices() == 9);
  CHECK(m2.n_cells() == 8);
  CHECK(m2.n_faces() == 16);
  interior = 0;
  for (const Face& f : m2.faces) interior += f.tag == FaceTag::Interior;
  CHECK(interior == 8);

  CHECK(build_structured_mesh(8).h_max ==
        doctest::Approx(std::sqrt(2.0) / 8).epsilon(1e-15));
  CHECK_THROWS_AS(build_structured_mesh(0), ConfigError);
}

TEST_CASE("mesh structural invariants") {
  const Mesh mesh = build_structured_mesh(4);
  double area = 0;
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const CellGeometry g = mesh.cell_geometry(c);
    CHECK(g.det > 0);
    CHECK(g.det == doctest::Approx(1.0 / 16).epsilon(1e-14));  // (1/n)^2
    area += g.det / 2;
    // Divergence theorem on constants: sum of len * n over edges is zero.
    Vec2 sum = Vec2::Zero();
    for (int e = 0; e < 3; ++e)
      sum += mesh.faces[mesh.cell_faces[c][e]].length * g.outward_normals[e];
    CHECK(sum.norm() <= 1e-14);
  }
  CHECK(area == doctest::Approx(1.0).epsilon(1e-14));

  for (const Face& f : mesh.faces) {
    CHECK(f.length > 0);
    CHECK(f.normal.norm() == doctest::Approx(1.0).epsilon(1e-14));
    if (f.is_boundary()) {
      CHECK(f.cells[0] >= 0);
      CHECK(f.tag == FaceTag::GammaBoundary);
    } else {
      CHECK(f.cells[0] < f.cells[1]);
    }
  }

  // Interior normals flip sign between the two adjacent cells.
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const CellGeometry g = mesh.cell_geometry(c);
    for (int e = 0; e < 3; ++e) {
      const EdgeOrientation eo = mesh.edge_orientation(c, e);
      const Face& f = mesh.faces[eo.face];
      const double dot = g.outward_normals[e].dot(f.normal);
      CHECK(std::abs(std::abs(dot) - 1.0) <= 1e-14);
      if (!f.is_boundary())
        CHECK(eo.normal_sign == (f.cells[0] == c ? 1.0 : -1.0));
      else
        CHECK(eo.normal_sign == 1.0);
    }
  }
}

TEST_CASE("cell geometry examples") {
  Mesh tiny;
  tiny.vertices = {Vec2(0, 0), Vec2(1, 0), Vec2(0, 1), Vec2(1, 1)};
  tiny.cells = {{0, 1, 2}, {0, 1, 3}};
  tiny.cell_faces.resize(2);

  const CellGeometry ref = tiny.cell_geometry(0);
  CHECK((ref.B - Mat2::Identity()).norm() <= 1e-15);
  CHECK(ref.det == doctest::Approx(1.0));

  const CellGeometry sheared = tiny.cell_geometry(1);  // (0,0),(1,0),(1,1)
  CHECK(std::abs(sheared.det) == doctest::Approx(1.0));
  CHECK(sheared.diameter == doctest::Approx(std::sqrt(2.0)));

  Mesh bad = tiny;
  bad.cells = {{0, 1, 1}};
  CHECK_THROWS_AS(bad.cell_geometry(0), StructuralError);
}

TEST_CASE("face trace mapping matches across sides") {
  const Mesh mesh = build_structured_mesh(3);
  const QuadratureRule rule = edge_rule(5);  // 3-point rule
  for (int f = 0; f < mesh.n_faces(); ++f) {
    const Face& face = mesh.faces[f];
    if (face.is_boundary()) {
      CHECK_THROWS_AS(face_quadrature_trace(mesh, f, FaceSide::second),
                      StructuralError);
      continue;
    }
    const FaceTrace a = face_quadrature_trace(mesh, f, FaceSide::first);
    const FaceTrace b = face_quadrature_trace(mesh, f, FaceSide::second);
    double worst = 0;
    for (int q = 0; q < rule.size(); ++q) {
      const double t = rule.points(q, 0);
      const Vec2 pa = a.geom.map(a.ref_point(t));
      const Vec2 pb = b.geom.map(b.ref_point(t));
      worst = std::max(worst, (pa - pb).norm());
      worst = std::max(worst, (pa - mesh.face_point(f, t)).norm());
    }
    CHECK(worst < 1e-13);
  }

  // Boundary face on x2 = 0 stays on the boundary.
  for (int f = 0; f < mesh.n_faces(); ++f) {
    const Face& face = mesh.faces[f];
    if (!face.is_boundary()) continue;
    if (std::abs(mesh.face_point(f, 0.5).y()) > 1e-12) continue;
    const FaceTrace tr = face_quadrature_trace(mesh, f, FaceSide::first);
    for (double t : {0.1, 0.5, 0.9})
      CHECK(std::abs(tr.geom.map(tr.ref_point(t)).y()) <= 1e-14);
  }
}

TEST_CASE("sigma tagging marks requested sides") {
  SigmaTagging tag;
  tag.right = true;
  const Mesh mesh = build_structured_mesh(3, tag);
  int n_sigma = 0, n_gamma = 0;
  for (int f = 0; f < mesh.n_faces(); ++f) {
    const Face& face = mesh.faces[f];
    if (!face.is_boundary()) continue;
    if (face.tag == FaceTag::SigmaBoundary) {
      ++n_sigma;
      CHECK(mesh.face_point(f, 0.5).x() == doctest::Approx(1.0));
    } else {
      ++n_gamma;
    }
  }
  CHECK(n_sigma == 3);
  CHECK(n_gamma == 9);
}

TEST_CASE("mesh text dump") {
  const Mesh mesh = build_structured_mesh(2);
  const std::string path = "mesh_dump_test.txt";
  write_mesh_text(mesh, path);
  std::FILE* in = std::fopen(path.c_str(), "r");
  REQUIRE(in != nullptr);
  int lines = 0;
  for (int ch; (ch = std::fgetc(in)) != EOF;) lines += ch == '\n';
  std::fclose(in);
  std::remove(path.c_str());
  CHECK(lines == mesh.n_vertices() + mesh.n_cells() + mesh.n_faces());
}

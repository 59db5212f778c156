#include "elastdg/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

namespace elastdg {

namespace {

Vec2 cell_centroid(const Mesh& mesh, int c) {
  const auto& v = mesh.cells[c];
  return (mesh.vertices[v[0]] + mesh.vertices[v[1]] + mesh.vertices[v[2]]) / 3.0;
}

bool on_side(const Vec2& a, const Vec2& b, int coord, double value) {
  return std::abs(a[coord] - value) < 1e-12 && std::abs(b[coord] - value) < 1e-12;
}

}  // namespace

CellGeometry Mesh::cell_geometry(int cell) const {
  const auto& v = cells[cell];
  const Vec2 p0 = vertices[v[0]], p1 = vertices[v[1]], p2 = vertices[v[2]];
  CellGeometry g;
  g.origin = p0;
  g.B.col(0) = p1 - p0;
  g.B.col(1) = p2 - p0;
  g.det = g.B.determinant();
  if (!(std::abs(g.det) > 1e-15))
    throw StructuralError("degenerate cell " + std::to_string(cell));
  g.diameter = std::max({(p1 - p0).norm(), (p2 - p1).norm(), (p0 - p2).norm()});
  // Local edge i joins vertices (i+1)%3 and (i+2)%3, opposite vertex i.
  for (int e = 0; e < 3; ++e) {
    const Vec2 a = vertices[v[(e + 1) % 3]], b = vertices[v[(e + 2) % 3]];
    Vec2 nrm(b.y() - a.y(), a.x() - b.x());
    nrm.normalize();
    if (nrm.dot(a - vertices[v[e]]) < 0) nrm = -nrm;
    g.outward_normals[e] = nrm;
  }
  return g;
}

EdgeOrientation Mesh::edge_orientation(int cell, int local_edge) const {
  EdgeOrientation eo;
  eo.face = cell_faces[cell][local_edge];
  const Face& f = faces[eo.face];
  const int local_start = cells[cell][(local_edge + 1) % 3];
  eo.flipped = (local_start != f.vertices[0]);
  const Vec2 nK = cell_geometry(cell).outward_normals[local_edge];
  eo.normal_sign = nK.dot(f.normal) > 0 ? 1.0 : -1.0;
  return eo;
}

Vec2 Mesh::face_point(int f, double t) const {
  const Face& face = faces[f];
  return (1.0 - t) * vertices[face.vertices[0]] + t * vertices[face.vertices[1]];
}

Mesh build_structured_mesh(int n, const SigmaTagging& sigma, DiagonalSplit split) {
  if (n < 1) throw ConfigError("mesh subdivision count must be >= 1");
  Mesh mesh;
  mesh.n = n;
  const double h = 1.0 / n;
  mesh.h_max = (split == DiagonalSplit::crossed ? 0.5 * std::sqrt(2.0) : std::sqrt(2.0)) * h;

  mesh.vertices.reserve((n + 1) * (n + 1));
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i) mesh.vertices.emplace_back(i * h, j * h);
  auto vid = [n](int i, int j) { return j * (n + 1) + i; };

  mesh.cells.reserve(2 * n * n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const int a = vid(i, j), b = vid(i + 1, j), c = vid(i + 1, j + 1), d = vid(i, j + 1);
      switch (split) {
        case DiagonalSplit::right:  // lower-left -> upper-right diagonal
          mesh.cells.push_back({a, b, c});
          mesh.cells.push_back({a, c, d});
          break;
        case DiagonalSplit::left:
          mesh.cells.push_back({a, b, d});
          mesh.cells.push_back({b, c, d});
          break;
        case DiagonalSplit::crossed: {
          const int m = static_cast<int>(mesh.vertices.size());
          mesh.vertices.emplace_back((i + 0.5) * h, (j + 0.5) * h);
          mesh.cells.push_back({a, b, m});
          mesh.cells.push_back({b, c, m});
          mesh.cells.push_back({c, d, m});
          mesh.cells.push_back({d, a, m});
          break;
        }
      }
    }

  // Collect faces; adjacent cells recorded in ascending cell id order.
  std::map<std::pair<int, int>, int> edge_index;
  mesh.cell_faces.resize(mesh.cells.size());
  for (int c = 0; c < mesh.n_cells(); ++c) {
    for (int e = 0; e < 3; ++e) {
      int va = mesh.cells[c][(e + 1) % 3], vb = mesh.cells[c][(e + 2) % 3];
      if (va > vb) std::swap(va, vb);
      auto [it, inserted] = edge_index.try_emplace({va, vb}, mesh.n_faces());
      if (inserted) {
        Face f;
        f.vertices = {va, vb};
        f.cells = {c, -1};
        f.length = (mesh.vertices[vb] - mesh.vertices[va]).norm();
        mesh.faces.push_back(f);
      } else {
        mesh.faces[it->second].cells[1] = c;
      }
      mesh.cell_faces[c][e] = it->second;
    }
  }

  for (Face& f : mesh.faces) {
    const Vec2 a = mesh.vertices[f.vertices[0]], b = mesh.vertices[f.vertices[1]];
    Vec2 nrm(b.y() - a.y(), a.x() - b.x());
    nrm.normalize();
    if (f.is_boundary()) {
      // Outward: away from the adjacent cell's centroid.
      if (nrm.dot(0.5 * (a + b) - cell_centroid(mesh, f.cells[0])) < 0) nrm = -nrm;
      const bool is_sigma = (on_side(a, b, 0, 0.0) && sigma.left) ||
                            (on_side(a, b, 0, 1.0) && sigma.right) ||
                            (on_side(a, b, 1, 0.0) && sigma.bottom) ||
                            (on_side(a, b, 1, 1.0) && sigma.top);
      f.tag = is_sigma ? FaceTag::SigmaBoundary : FaceTag::GammaBoundary;
    } else {
      // Fixed orientation: from the lower cell id into the higher one.
      if (nrm.dot(cell_centroid(mesh, f.cells[1]) - cell_centroid(mesh, f.cells[0])) < 0)
        nrm = -nrm;
      f.tag = FaceTag::Interior;
    }
    f.normal = nrm;
  }
  return mesh;
}

FaceTrace face_quadrature_trace(const Mesh& mesh, int face, FaceSide side) {
  const Face& f = mesh.faces[face];
  if (side == FaceSide::second && f.is_boundary())
    throw StructuralError("boundary face " + std::to_string(face) +
                          " has no second side");
  FaceTrace tr;
  tr.cell = (side == FaceSide::first) ? f.cells[0] : f.cells[1];
  tr.geom = mesh.cell_geometry(tr.cell);
  tr.a = mesh.vertices[f.vertices[0]];
  tr.b = mesh.vertices[f.vertices[1]];
  return tr;
}

void write_mesh_text(const Mesh& mesh, const std::string& path) {
  std::FILE* out = std::fopen(path.c_str(), "w");
  if (!out) throw ConfigError("cannot open " + path);
  for (const Vec2& v : mesh.vertices) std::fprintf(out, "%.17g %.17g\n", v.x(), v.y());
  for (const auto& c : mesh.cells) std::fprintf(out, "%d %d %d\n", c[0], c[1], c[2]);
  for (const Face& f : mesh.faces) {
    const char* tag = f.tag == FaceTag::Interior ? "interior"
                      : f.tag == FaceTag::GammaBoundary ? "gamma" : "sigma";
    std::fprintf(out, "%d %d %s\n", f.vertices[0], f.vertices[1], tag);
  }
  std::fclose(out);
}

}  // namespace elastdg

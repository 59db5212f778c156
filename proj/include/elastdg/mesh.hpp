#pragma once

#include <array>
#include <set>
#include <string>
#include <vector>

#include "elastdg/types.hpp"

namespace elastdg {

enum class FaceTag { Interior, GammaBoundary, SigmaBoundary };

/// Mesh edge. `vertices` is ordered by ascending global vertex id; this
/// order defines the global edge parameter t in [0,1] used for shared
/// degrees of freedom and matched face quadrature. For interior faces the
/// stored normal points from the lower-id cell into the higher-id one; on
/// the boundary it points out of the domain.
struct Face {
  std::array<int, 2> vertices{-1, -1};
  std::array<int, 2> cells{-1, -1};  // cells[1] == -1 on the boundary
  Vec2 normal = Vec2::Zero();
  double length = 0.0;  // h_F
  FaceTag tag = FaceTag::Interior;

  bool is_boundary() const { return cells[1] < 0; }
};

/// Affine map from the reference triangle (0,0),(1,0),(0,1) onto a cell:
/// x = origin + B * x_ref.
struct CellGeometry {
  Mat2 B = Mat2::Identity();
  Vec2 origin = Vec2::Zero();
  double det = 1.0;       // positive for counterclockwise cells
  double diameter = 0.0;  // h_K
  std::array<Vec2, 3> outward_normals{};  // per local edge

  Vec2 map(const Vec2& ref) const { return origin + B * ref; }
  Vec2 unmap(const Vec2& phys) const { return B.inverse() * (phys - origin); }
};

/// Orientation of a cell's local edge relative to the global face record.
struct EdgeOrientation {
  int face = -1;
  bool flipped = false;    // local traversal opposes the global one
  double normal_sign = 1;  // n_K . n_F
};

/// Which axis-aligned sides of the unit square carry the traction
/// (Sigma) boundary condition. Empty by default: the benchmark problem
/// fixes the body on the whole boundary.
struct SigmaTagging {
  bool left = false, right = false, bottom = false, top = false;

  static SigmaTagging none() { return {}; }
  bool empty() const { return !(left || right || bottom || top); }
};

/// Structured triangulation of the unit square. Immutable after
/// construction; safe for concurrent reads.
class Mesh {
 public:
  std::vector<Vec2> vertices;
  std::vector<std::array<int, 3>> cells;  // counterclockwise vertex ids
  std::vector<Face> faces;
  std::vector<std::array<int, 3>> cell_faces;  // local edge -> face id
  double h_max = 0.0;
  int n = 0;  // subdivisions per side, h = 1/n along the axes

  int n_cells() const { return static_cast<int>(cells.size()); }
  int n_faces() const { return static_cast<int>(faces.size()); }
  int n_vertices() const { return static_cast<int>(vertices.size()); }

  CellGeometry cell_geometry(int cell) const;
  EdgeOrientation edge_orientation(int cell, int local_edge) const;

  /// Physical point on face `f` at global parameter t in [0,1].
  Vec2 face_point(int f, double t) const;
};

/// Which diagonal splits each grid square. The benchmark default is the
/// lower-left to upper-right split; the other split and the crossed
/// (4-triangle) pattern exist for sensitivity checks.
enum class DiagonalSplit { right, left, crossed };

Mesh build_structured_mesh(int n, const SigmaTagging& sigma = SigmaTagging::none(),
                           DiagonalSplit split = DiagonalSplit::right);

/// Side of a face for trace evaluation. `first` is the lower-id adjacent
/// cell (the only one for boundary faces).
enum class FaceSide { first, second };

/// Maps the global edge parameter to reference coordinates of the adjacent
/// cell on the requested side. Matched traversal: both sides of an
/// interior face visit the same physical points for the same t.
struct FaceTrace {
  int cell = -1;
  CellGeometry geom;
  Vec2 a = Vec2::Zero();  // face endpoints, global order
  Vec2 b = Vec2::Zero();

  Vec2 ref_point(double t) const { return geom.unmap((1.0 - t) * a + t * b); }
};

FaceTrace face_quadrature_trace(const Mesh& mesh, int face, FaceSide side);

/// Debug dump: vertices (x y), cells (v0 v1 v2), faces (v0 v1 tag).
void write_mesh_text(const Mesh& mesh, const std::string& path);

}  // namespace elastdg

#include "elastdg/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

#include "elastdg/quadrature.hpp"

namespace elastdg {

namespace {

// Plain (row, col, value) accumulation with exact-zero filtering, built
// into compressed form by an in-place sort + duplicate merge. Avoids the
// extra transposed copy of setFromTriplets, which matters for the large
// high-order DG systems.
struct TripletBuffer {
  struct Entry {
    int row, col;
    double value;
  };
  std::vector<Entry> entries;

  void reserve(std::size_t n) { entries.reserve(n); }
  void add(int row, int col, double value) {
    if (value != 0.0) entries.push_back({row, col, value});
  }

  Eigen::SparseMatrix<double> build(int size) {
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
      return a.col != b.col ? a.col < b.col : a.row < b.row;
    });
    Eigen::VectorXi counts = Eigen::VectorXi::Zero(size);
    for (std::size_t i = 0; i < entries.size(); ++i)
      if (i == 0 || entries[i].col != entries[i - 1].col ||
          entries[i].row != entries[i - 1].row)
        ++counts[entries[i].col];
    Eigen::SparseMatrix<double> M(size, size);
    M.reserve(counts);
    for (std::size_t i = 0; i < entries.size();) {
      const int r = entries[i].row, c = entries[i].col;
      double sum = 0.0;
      for (; i < entries.size() && entries[i].row == r && entries[i].col == c; ++i)
        sum += entries[i].value;
      M.insert(r, c) = sum;
    }
    M.makeCompressed();
    return M;
  }
};

// Symmetric elimination of constrained dofs (their value is zero, so the
// right hand side needs no lift) and final compression.
SparseSystem finalize_system(TripletBuffer& trip, Eigen::VectorXd& rhs,
                             const DofMap& map, const SystemMetadata& meta) {
  SparseSystem sys;
  sys.n_stress = map.n_stress;
  sys.n_rotation = map.n_rotation;
  sys.meta = meta;

  if (map.constrained.empty()) {
    sys.matrix = trip.build(map.total());
    sys.rhs = std::move(rhs);
    return sys;
  }

  std::vector<int> to_reduced(map.total());
  std::vector<char> removed(map.total(), 0);
  for (int id : map.constrained) removed[id] = 1;
  int kept = 0;
  for (int i = 0; i < map.total(); ++i) to_reduced[i] = removed[i] ? -1 : kept++;
  if (kept == 0)
    throw StructuralError("all degrees of freedom are constrained; mesh too coarse");

  sys.kept.reserve(kept);
  for (int i = 0; i < map.total(); ++i)
    if (!removed[i]) sys.kept.push_back(i);

  std::size_t out = 0;
  for (const auto& e : trip.entries) {
    const int r = to_reduced[e.row], c = to_reduced[e.col];
    if (r >= 0 && c >= 0) trip.entries[out++] = {r, c, e.value};
  }
  trip.entries.resize(out);
  sys.matrix = trip.build(kept);
  sys.rhs.resize(kept);
  for (int i = 0; i < kept; ++i) sys.rhs[i] = rhs[sys.kept[i]];
  return sys;
}

Eigen::VectorXd physical_weights(const QuadratureRule& rule, double det) {
  return rule.weights * det;
}

}  // namespace

SparseSystem assemble_cg(const Mesh& mesh, int k, const LameParams& params,
                         WaveNumber kappa, const ManufacturedSolution& ms,
                         int quad_bump) {
  const DofMap map = build_dofmap(mesh, k, Scheme::CG);
  const BdmElement element(k);
  const ScalarBasis rot_basis(k - 1);
  const auto cc = compliance_coefficients(params);
  const double k2 = kappa.value * kappa.value;
  const int ns = element.n_shape();
  const int nr = rot_basis.dim();

  const QuadratureRule stiff_q = triangle_rule(2 * k + 2);
  const QuadratureRule data_q = triangle_rule(2 * k + 6 + quad_bump);
  const QuadratureRule edge_q = edge_rule(2 * k + 6 + quad_bump);
  const BdmElement::Values stiff_v = element.evaluate(stiff_q.points);
  const BdmElement::Values data_v = element.evaluate(data_q.points);
  Eigen::MatrixXd rot_phi;
  rot_basis.evaluate(stiff_q.points, &rot_phi);

  TripletBuffer trip;
  trip.reserve(static_cast<std::size_t>(mesh.n_cells()) *
               (4 * ns * ns + 4 * ns * nr));
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(map.total());

  Eigen::MatrixXd local(2 * ns, 2 * ns);
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const CellGeometry g = mesh.cell_geometry(c);
    const Eigen::VectorXd w = physical_weights(stiff_q, g.det);

    // Piola-transformed shape values and divergences.
    const Eigen::MatrixXd px = (g.B(0, 0) * stiff_v.x + g.B(0, 1) * stiff_v.y) / g.det;
    const Eigen::MatrixXd py = (g.B(1, 0) * stiff_v.x + g.B(1, 1) * stiff_v.y) / g.det;
    const Eigen::MatrixXd dv = stiff_v.div / g.det;

    const Eigen::MatrixXd Gdd = dv.transpose() * w.asDiagonal() * dv;
    const Eigen::MatrixXd Gvv = px.transpose() * w.asDiagonal() * px +
                                py.transpose() * w.asDiagonal() * py;
    const Eigen::MatrixXd Txx = px.transpose() * w.asDiagonal() * px;
    const Eigen::MatrixXd Txy = px.transpose() * w.asDiagonal() * py;
    const Eigen::MatrixXd Tyx = Txy.transpose();
    const Eigen::MatrixXd Tyy = py.transpose() * w.asDiagonal() * py;
    const std::array<const Eigen::MatrixXd*, 4> trace_blocks{&Txx, &Txy, &Tyx, &Tyy};

    // Stress-stress block: div.div - kappa^2 C^{-1} pairing, the trace
    // part of the compliance couples the two tensor rows.
    for (int r = 0; r < 2; ++r)
      for (int s = 0; s < 2; ++s) {
        Eigen::MatrixXd blk = -k2 * cc.trace_factor * (*trace_blocks[2 * r + s]);
        if (r == s) blk += Gdd - k2 * cc.dev_factor * Gvv;
        local.block(r * ns, s * ns, ns, ns) = blk;
      }

    const int* ids = map.stress_indices(c);
    const double* sg = map.stress_signs(c);
    for (int i = 0; i < 2 * ns; ++i)
      for (int j = 0; j < 2 * ns; ++j)
        trip.add(ids[i], ids[j], sg[i] * sg[j] * local(i, j));

    // Weak symmetry coupling, assembled once and mirrored. With
    // skew(rho) = [[0,-rho],[rho,0]]: skew(rho):tau = rho (tau21 - tau12).
    const Eigen::MatrixXd B0 = -(rot_phi.transpose() * w.asDiagonal() * py);
    const Eigen::MatrixXd B1 = rot_phi.transpose() * w.asDiagonal() * px;
    for (int m = 0; m < nr; ++m) {
      const int rid = map.rotation_index(c, m);
      for (int j = 0; j < ns; ++j) {
        const double v0 = -k2 * sg[j] * B0(m, j);
        trip.add(ids[j], rid, v0);
        trip.add(rid, ids[j], v0);
        const double v1 = -k2 * sg[ns + j] * B1(m, j);
        trip.add(ids[ns + j], rid, v1);
        trip.add(rid, ids[ns + j], v1);
      }
    }

    // Load: int F . div tau, with the elevated data rule.
    const Eigen::VectorXd wd = physical_weights(data_q, g.det);
    for (int q = 0; q < data_q.size(); ++q) {
      const Vec2 F = ms.body_force(g.map(data_q.points.row(q).transpose()));
      const double wq = wd[q] / g.det;  // pairs with the reference divergence
      for (int j = 0; j < ns; ++j) {
        rhs[ids[j]] += sg[j] * wq * F.x() * data_v.div(q, j);
        rhs[ids[ns + j]] += sg[ns + j] * wq * F.y() * data_v.div(q, j);
      }
    }
  }

  // Nonhomogeneous Dirichlet datum on Gamma: -kappa^2 int g.(tau n).
  for (int f = 0; f < mesh.n_faces(); ++f) {
    const Face& face = mesh.faces[f];
    if (face.tag != FaceTag::GammaBoundary) continue;
    const FaceTrace tr = face_quadrature_trace(mesh, f, FaceSide::first);
    Eigen::Matrix<double, Eigen::Dynamic, 2> ref(edge_q.size(), 2);
    for (int q = 0; q < edge_q.size(); ++q)
      ref.row(q) = tr.ref_point(edge_q.points(q, 0)).transpose();
    const BdmElement::Values tv = element.evaluate(ref);
    const int* ids = map.stress_indices(tr.cell);
    const double* sg = map.stress_signs(tr.cell);
    const CellGeometry& g = tr.geom;
    for (int q = 0; q < edge_q.size(); ++q) {
      const double t = edge_q.points(q, 0);
      const Vec2 gval = ms.dirichlet(mesh.face_point(f, t));
      const double wq = edge_q.weights[q] * face.length;
      for (int j = 0; j < element.n_shape(); ++j) {
        const Vec2 v((g.B(0, 0) * tv.x(q, j) + g.B(0, 1) * tv.y(q, j)) / g.det,
                     (g.B(1, 0) * tv.x(q, j) + g.B(1, 1) * tv.y(q, j)) / g.det);
        const double vn = v.dot(face.normal);
        rhs[ids[j]] -= sg[j] * k2 * wq * gval.x() * vn;
        rhs[ids[element.n_shape() + j]] -=
            sg[element.n_shape() + j] * k2 * wq * gval.y() * vn;
      }
    }
  }

  SystemMetadata meta{Scheme::CG, k, mesh.n, kappa.value, 0.0, params, quad_bump};
  return finalize_system(trip, rhs, map, meta);
}

SparseSystem assemble_dg(const Mesh& mesh, int k, const LameParams& params,
                         WaveNumber kappa, double penalty,
                         const ManufacturedSolution& ms, int quad_bump) {
  if (!(penalty > 0)) throw ConfigError("DG penalty parameter must be positive");
  const DofMap map = build_dofmap(mesh, k, Scheme::DG);
  const ScalarBasis basis(k);
  const ScalarBasis rot_basis(k - 1);
  const auto cc = compliance_coefficients(params);
  const double k2 = kappa.value * kappa.value;
  const int dim = basis.dim();
  const int nr = rot_basis.dim();

  const QuadratureRule stiff_q = triangle_rule(2 * k + 2);
  const QuadratureRule data_q = triangle_rule(2 * k + 6 + quad_bump);
  const QuadratureRule face_q = edge_rule(2 * k + 6 + quad_bump);

  Eigen::MatrixXd phi, gx, gy, phi_d, gx_d, gy_d, rot_phi;
  basis.evaluate(stiff_q.points, &phi, &gx, &gy);
  basis.evaluate(data_q.points, &phi_d, &gx_d, &gy_d);
  rot_basis.evaluate(stiff_q.points, &rot_phi);

  std::size_t n_int = 0, n_sig = 0;
  for (const Face& f : mesh.faces) {
    if (f.tag == FaceTag::Interior) ++n_int;
    if (f.tag == FaceTag::SigmaBoundary) ++n_sig;
  }
  TripletBuffer trip;
  trip.reserve(static_cast<std::size_t>(mesh.n_cells()) *
                   (10 * dim * dim + 4 * dim * nr) +
               n_int * 32 * static_cast<std::size_t>(dim) * dim +
               n_sig * 8 * static_cast<std::size_t>(dim) * dim);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(map.total());

  // Component order: 0 -> (1,1), 1 -> (1,2), 2 -> (2,1), 3 -> (2,2).
  const auto row_of = [](int rc) { return rc >> 1; };
  const auto col_of = [](int rc) { return rc & 1; };

  for (int c = 0; c < mesh.n_cells(); ++c) {
    const CellGeometry g = mesh.cell_geometry(c);
    const Mat2 BinvT = g.B.inverse().transpose();
    const Eigen::VectorXd w = physical_weights(stiff_q, g.det);

    const Eigen::MatrixXd gxp = BinvT(0, 0) * gx + BinvT(0, 1) * gy;
    const Eigen::MatrixXd gyp = BinvT(1, 0) * gx + BinvT(1, 1) * gy;
    const Eigen::MatrixXd mass = phi.transpose() * w.asDiagonal() * phi;
    const Eigen::MatrixXd Gxx = gxp.transpose() * w.asDiagonal() * gxp;
    const Eigen::MatrixXd Gxy = gxp.transpose() * w.asDiagonal() * gyp;
    const Eigen::MatrixXd Gyy = gyp.transpose() * w.asDiagonal() * gyp;

    const int base = c * map.stress_per_cell;
    for (int rc = 0; rc < 4; ++rc)
      for (int sc = 0; sc < 4; ++sc) {
        Eigen::MatrixXd blk = Eigen::MatrixXd::Zero(dim, dim);
        if (row_of(rc) == row_of(sc)) {
          const int b1 = col_of(rc), b2 = col_of(sc);
          if (b1 == 0 && b2 == 0) blk += Gxx;
          else if (b1 == 0 && b2 == 1) blk += Gxy;
          else if (b1 == 1 && b2 == 0) blk += Gxy.transpose();
          else blk += Gyy;
        }
        if (rc == sc) blk -= k2 * cc.dev_factor * mass;
        if (row_of(rc) == col_of(rc) && row_of(sc) == col_of(sc))
          blk -= k2 * cc.trace_factor * mass;
        for (int i = 0; i < dim; ++i)
          for (int j = 0; j < dim; ++j)
            trip.add(base + rc * dim + i, base + sc * dim + j, blk(i, j));
      }

    // skew(rho):tau picks -tau12 + tau21.
    const Eigen::MatrixXd R = rot_phi.transpose() * w.asDiagonal() * phi;
    for (int m = 0; m < nr; ++m) {
      const int rid = map.rotation_index(c, m);
      for (int j = 0; j < dim; ++j) {
        const double v12 = k2 * R(m, j);   // -k2 * (-R)
        const double v21 = -k2 * R(m, j);  // -k2 * (+R)
        trip.add(base + 1 * dim + j, rid, v12);
        trip.add(rid, base + 1 * dim + j, v12);
        trip.add(base + 2 * dim + j, rid, v21);
        trip.add(rid, base + 2 * dim + j, v21);
      }
    }

    const Eigen::VectorXd wd = physical_weights(data_q, g.det);
    const Eigen::MatrixXd gxp_d = BinvT(0, 0) * gx_d + BinvT(0, 1) * gy_d;
    const Eigen::MatrixXd gyp_d = BinvT(1, 0) * gx_d + BinvT(1, 1) * gy_d;
    for (int q = 0; q < data_q.size(); ++q) {
      const Vec2 F = ms.body_force(g.map(data_q.points.row(q).transpose()));
      for (int i = 0; i < dim; ++i) {
        rhs[base + 0 * dim + i] += wd[q] * F.x() * gxp_d(q, i);
        rhs[base + 1 * dim + i] += wd[q] * F.x() * gyp_d(q, i);
        rhs[base + 2 * dim + i] += wd[q] * F.y() * gxp_d(q, i);
        rhs[base + 3 * dim + i] += wd[q] * F.y() * gyp_d(q, i);
      }
    }
  }

  // Face terms. F* = interior + Sigma faces carry penalty, coupling and
  // the mean-F load; Gamma faces only carry the Dirichlet load.
  const int nq = face_q.size();
  for (int f = 0; f < mesh.n_faces(); ++f) {
    const Face& face = mesh.faces[f];
    const int n_sides = face.is_boundary() ? 1 : 2;

    if (face.tag == FaceTag::GammaBoundary) {
      const FaceTrace tr = face_quadrature_trace(mesh, f, FaceSide::first);
      Eigen::Matrix<double, Eigen::Dynamic, 2> ref(nq, 2);
      for (int q = 0; q < nq; ++q)
        ref.row(q) = tr.ref_point(face_q.points(q, 0)).transpose();
      Eigen::MatrixXd tphi;
      basis.evaluate(ref, &tphi);
      const int base = tr.cell * map.stress_per_cell;
      for (int q = 0; q < nq; ++q) {
        const Vec2 gval = ms.dirichlet(mesh.face_point(f, face_q.points(q, 0)));
        const double wq = face_q.weights[q] * face.length * k2;
        for (int i = 0; i < dim; ++i)
          for (int rc = 0; rc < 4; ++rc) {
            const double jn = tphi(q, i) * face.normal[col_of(rc)];
            rhs[base + rc * dim + i] -= wq * gval[row_of(rc)] * jn;
          }
      }
      continue;
    }

    const int nloc = n_sides * 4 * dim;
    Eigen::MatrixXd Jx = Eigen::MatrixXd::Zero(nq, nloc);
    Eigen::MatrixXd Jy = Eigen::MatrixXd::Zero(nq, nloc);
    Eigen::MatrixXd Mx = Eigen::MatrixXd::Zero(nq, nloc);
    Eigen::MatrixXd My = Eigen::MatrixXd::Zero(nq, nloc);
    std::vector<int> ids(nloc);
    const double mean_factor = (n_sides == 2) ? 0.5 : 1.0;

    for (int s = 0; s < n_sides; ++s) {
      const FaceTrace tr = face_quadrature_trace(
          mesh, f, s == 0 ? FaceSide::first : FaceSide::second);
      const Vec2 nK = (s == 0) ? face.normal : Vec2(-face.normal);
      Eigen::Matrix<double, Eigen::Dynamic, 2> ref(nq, 2);
      for (int q = 0; q < nq; ++q)
        ref.row(q) = tr.ref_point(face_q.points(q, 0)).transpose();
      Eigen::MatrixXd tphi, tgx, tgy;
      basis.evaluate(ref, &tphi, &tgx, &tgy);
      const Mat2 BinvT = tr.geom.B.inverse().transpose();
      const Eigen::MatrixXd tgxp = BinvT(0, 0) * tgx + BinvT(0, 1) * tgy;
      const Eigen::MatrixXd tgyp = BinvT(1, 0) * tgx + BinvT(1, 1) * tgy;

      const int cell_base = tr.cell * map.stress_per_cell;
      for (int rc = 0; rc < 4; ++rc) {
        const int a = row_of(rc), b = col_of(rc);
        const Eigen::MatrixXd& deriv = (b == 0) ? tgxp : tgyp;
        for (int i = 0; i < dim; ++i) {
          const int l = s * 4 * dim + rc * dim + i;
          ids[l] = cell_base + rc * dim + i;
          if (a == 0) {
            Jx.col(l) = tphi.col(i) * nK[b];
            Mx.col(l) = mean_factor * deriv.col(i);
          } else {
            Jy.col(l) = tphi.col(i) * nK[b];
            My.col(l) = mean_factor * deriv.col(i);
          }
        }
      }

      // Load term -int_{F*} mean(F) . [[tau]].
      for (int q = 0; q < nq; ++q) {
        const Vec2 F = ms.body_force(mesh.face_point(f, face_q.points(q, 0)));
        const double wq = face_q.weights[q] * face.length;
        for (int rc = 0; rc < 4; ++rc)
          for (int i = 0; i < dim; ++i)
            rhs[cell_base + rc * dim + i] -=
                wq * F[row_of(rc)] * tphi(q, i) * nK[col_of(rc)];
      }
    }

    const Eigen::VectorXd w = face_q.weights * face.length;
    const Eigen::MatrixXd G =
        Mx.transpose() * w.asDiagonal() * Jx + My.transpose() * w.asDiagonal() * Jy;
    Eigen::MatrixXd local =
        (penalty / face.length) * (Jx.transpose() * w.asDiagonal() * Jx +
                                   Jy.transpose() * w.asDiagonal() * Jy);
    local -= G + G.transpose();
    for (int i = 0; i < nloc; ++i)
      for (int j = 0; j < nloc; ++j) trip.add(ids[i], ids[j], local(i, j));
  }

  SystemMetadata meta{Scheme::DG, k, mesh.n, kappa.value, penalty, params, quad_bump};
  return finalize_system(trip, rhs, map, meta);
}

FaceOperatorSample eval_jump_average(const std::vector<Mat2>& first_side,
                                     const std::vector<Mat2>& second_side,
                                     const Vec2& normal_of_first) {
  if (!second_side.empty() && second_side.size() != first_side.size())
    throw StructuralError("mismatched trace point counts on face sides");
  FaceOperatorSample out;
  out.mean.reserve(first_side.size());
  out.jump.reserve(first_side.size());
  for (std::size_t q = 0; q < first_side.size(); ++q) {
    if (second_side.empty()) {
      out.mean.push_back(first_side[q]);
      out.jump.push_back(first_side[q] * normal_of_first);
    } else {
      out.mean.push_back(0.5 * (first_side[q] + second_side[q]));
      out.jump.push_back(first_side[q] * normal_of_first -
                         second_side[q] * normal_of_first);
    }
  }
  return out;
}

double discrete_trace_ratio(const Mesh& mesh, int k, int samples_per_cell,
                            unsigned seed) {
  if (samples_per_cell < 1) throw ConfigError("need at least one sample");
  const ScalarBasis basis(k);
  const int dim = basis.dim();
  const QuadratureRule vol_q = triangle_rule(2 * k);
  const QuadratureRule edg_q = edge_rule(2 * k);

  Eigen::MatrixXd vol_phi;
  basis.evaluate(vol_q.points, &vol_phi);
  std::array<Eigen::MatrixXd, 3> edge_phi;
  const auto& edges = reference_edges();
  for (int e = 0; e < 3; ++e) {
    Eigen::Matrix<double, Eigen::Dynamic, 2> pts(edg_q.size(), 2);
    for (int q = 0; q < edg_q.size(); ++q) {
      const double t = edg_q.points(q, 0);
      pts.row(q) = ((1.0 - t) * edges[e].a + t * edges[e].b).transpose();
    }
    basis.evaluate(pts, &edge_phi[e]);
  }

  double worst = 0.0;
  for (int c = 0; c < mesh.n_cells(); ++c) {
    // Every cell sees the same sample set, so congruent cells across
    // refinements give identical ratios (affine scale invariance).
    std::mt19937 rng(seed);
    std::normal_distribution<double> dist;
    const CellGeometry g = mesh.cell_geometry(c);
    for (int s = 0; s < samples_per_cell; ++s) {
      Eigen::VectorXd coeff(dim);
      for (int i = 0; i < dim; ++i) coeff[i] = dist(rng);
      const Eigen::VectorXd vv = vol_phi * coeff;
      const double vol = g.det * vv.cwiseAbs2().dot(vol_q.weights);
      double bnd = 0.0;
      for (int e = 0; e < 3; ++e) {
        const double len = mesh.faces[mesh.cell_faces[c][e]].length;
        const Eigen::VectorXd ev = edge_phi[e] * coeff;
        bnd += len * ev.cwiseAbs2().dot(edg_q.weights);
      }
      worst = std::max(worst, g.diameter * bnd / vol);
    }
  }
  return worst;
}

void write_matrix_market(const SparseSystem& system, const std::string& path) {
  std::FILE* out = std::fopen(path.c_str(), "w");
  if (!out) throw ConfigError("cannot open " + path);
  const auto& M = system.matrix;
  std::size_t nnz_lower = 0;
  for (int c = 0; c < M.outerSize(); ++c)
    for (Eigen::SparseMatrix<double>::InnerIterator it(M, c); it; ++it)
      if (it.row() >= it.col()) ++nnz_lower;
  std::fprintf(out, "%%%%MatrixMarket matrix coordinate real symmetric\n");
  std::fprintf(out, "%d %d %zu\n", static_cast<int>(M.rows()),
               static_cast<int>(M.cols()), nnz_lower);
  for (int c = 0; c < M.outerSize(); ++c)
    for (Eigen::SparseMatrix<double>::InnerIterator it(M, c); it; ++it)
      if (it.row() >= it.col())
        std::fprintf(out, "%ld %ld %.17g\n", it.row() + 1, it.col() + 1, it.value());
  std::fclose(out);
}

}  // namespace elastdg

#include "elastdg/experiments.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "elastdg/assembly.hpp"
#include "elastdg/solve.hpp"

namespace elastdg {

namespace {

constexpr const char* kNoRate = "—";  // em dash, as in the tables

void validate_common(const ExperimentConfig& c) {
  if (c.k < 1) throw ConfigError("polynomial degree must be >= 1");
  if (c.scheme == Scheme::DG) {
    if (!c.penalty || !(*c.penalty > 0))
      throw ConfigError("the DG scheme needs a positive penalty parameter a");
  }
  for (std::size_t i = 1; i < c.ns.size(); ++i)
    if (c.ns[i] <= c.ns[i - 1])
      throw ConfigError("mesh list must be strictly increasing");
  for (int n : c.ns) {
    if (n < 1) throw ConfigError("mesh subdivisions must be >= 1");
    if (estimate_dofs(c.scheme, c.k, n) > kDeskScaleDofLimit && !c.allow_large)
      throw ConfigError("n=" + std::to_string(n) +
                        " exceeds the desk-scale budget for k=" +
                        std::to_string(c.k) + "; pass --allow-large to force");
  }
}

PointResult solve_point(const ExperimentConfig& c, int n, double kappa,
                        double penalty, const ManufacturedSolution& ms) {
  PointResult pr;
  pr.n = n;
  pr.a = penalty;
  try {
    const Mesh mesh = build_structured_mesh(n);
    const WaveNumber kw(kappa);
    const SparseSystem sys =
        (c.scheme == Scheme::CG)
            ? assemble_cg(mesh, c.k, c.params, kw, ms, c.quad_bump)
            : assemble_dg(mesh, c.k, c.params, kw, penalty, ms, c.quad_bump);
    const auto [sol, report] = solve(sys);
    const DofMap map = build_dofmap(mesh, c.k, c.scheme);
    pr.report = measure_errors(mesh, map, sol, ms, c.quad_bump);
    pr.solved = true;
  } catch (const SolverError& err) {
    pr.failure = err.what();
  }
  return pr;
}

// Paper-style table: a 1/h column, then an (error, rate) pair per kappa.
// Errors are printed with 3 significand digits; each rate is recomputed
// from the two rounded errors above it so a reader of the file can verify
// it exactly.
CsvTable render_table(const ConvergenceStudy& study, bool rotation) {
  std::ostringstream out;
  out << "1/h";
  for (double kappa : study.config.kappas) {
    std::ostringstream tag;
    tag << "kappa" << kappa;
    out << ",e_" << (rotation ? "rot" : "sigma") << "_" << tag.str() << ",rate_"
        << tag.str();
  }
  out << "\n";

  const std::size_t n_rows = study.config.ns.size();
  for (std::size_t row = 0; row < n_rows; ++row) {
    out << study.config.ns[row];
    for (std::size_t kc = 0; kc < study.config.kappas.size(); ++kc) {
      const PointResult& pt = study.points[kc][row];
      if (!pt.solved) {
        out << ",failed," << kNoRate;
        continue;
      }
      const double err = rotation ? pt.report.err_rotation : pt.report.err_sigma;
      const std::string err_str = format_sci3(err);
      out << "," << err_str << ",";
      const PointResult* prev = row > 0 ? &study.points[kc][row - 1] : nullptr;
      if (!prev || !prev->solved) {
        out << kNoRate;
      } else {
        const double prev_err = std::stod(
            format_sci3(rotation ? prev->report.err_rotation : prev->report.err_sigma));
        const double rate = std::log(prev_err / std::stod(err_str)) /
                            std::log(static_cast<double>(study.config.ns[row]) /
                                     study.config.ns[row - 1]);
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.15g", rate);
        out << buf;
      }
    }
    out << "\n";
  }
  return {out.str()};
}

}  // namespace

long estimate_dofs(Scheme scheme, int k, int n) {
  const long cells = 2L * n * n;
  const long faces = 3L * n * n + 2L * n;
  const long rot = cells * poly_space_dim(k - 1);
  if (scheme == Scheme::DG) return cells * 4L * poly_space_dim(k) + rot;
  return 2L * (faces * (k + 1) + cells * (k * k - 1)) + rot;
}

std::string format_sci3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open " + path);
  out << text;
}

CsvTable ConvergenceStudy::sigma_table() const { return render_table(*this, false); }
CsvTable ConvergenceStudy::rotation_table() const { return render_table(*this, true); }

ConvergenceStudy run_convergence(const ExperimentConfig& config) {
  validate_common(config);
  if (config.kappas.empty() || config.ns.empty())
    throw ConfigError("convergence study needs wave numbers and a mesh list");

  ConvergenceStudy study;
  study.config = config;
  for (double kappa : config.kappas) {
    const ManufacturedSolution ms = exact_fields(WaveNumber(kappa), config.params);
    std::vector<PointResult> column;
    for (int n : config.ns) {
      column.push_back(
          solve_point(config, n, kappa, config.penalty.value_or(0.0), ms));
      if (!column.back().solved) study.any_failed = true;
    }
    study.points.push_back(std::move(column));
  }
  return study;
}

ConvergenceStudy run_locking(const ExperimentConfig& config) {
  if (config.scheme != Scheme::DG)
    throw ConfigError("the locking study uses the DG scheme");
  return run_convergence(config);
}

PenaltySweep run_penalty_sweep(const ExperimentConfig& config) {
  ExperimentConfig c = config;
  c.penalty = c.a_grid.empty() ? c.penalty : std::optional<double>(c.a_grid.front());
  if (c.scheme != Scheme::DG)
    throw ConfigError("the penalty sweep applies to the DG scheme");
  if (c.a_grid.empty()) throw ConfigError("penalty sweep needs an a-grid");
  if (c.kappas.size() != 1 || c.ns.size() != 1)
    throw ConfigError("penalty sweep takes one wave number and one mesh");
  validate_common(c);

  PenaltySweep sweep;
  sweep.config = config;
  const ManufacturedSolution ms =
      exact_fields(WaveNumber(c.kappas[0]), c.params);
  for (double a : config.a_grid) {
    if (!(a > 0)) throw ConfigError("penalty grid values must be positive");
    sweep.points.push_back(solve_point(c, c.ns[0], c.kappas[0], a, ms));
    if (!sweep.points.back().solved) sweep.any_failed = true;
  }
  return sweep;
}

CsvTable PenaltySweep::table() const {
  std::ostringstream out;
  out << "a,e_sigma,e_rot\n";
  for (const PointResult& pt : points) {
    char abuf[32];
    std::snprintf(abuf, sizeof abuf, "%.6g", pt.a);
    out << abuf;
    if (pt.solved)
      out << "," << format_sci3(pt.report.err_sigma) << ","
          << format_sci3(pt.report.err_rotation) << "\n";
    else
      out << ",failed,failed\n";
  }
  return {out.str()};
}

PatchResult run_patch(const ExperimentConfig& config) {
  ExperimentConfig c = config;
  if (c.ns.empty()) throw ConfigError("patch test needs a mesh size");
  if (c.kappas.empty()) c.kappas = {2.0};
  const double a = c.penalty.value_or(100.0);

  PatchResult result;
  result.config = config;
  const ManufacturedSolution ms =
      polynomial_fields(c.k, WaveNumber(c.kappas[0]), c.params);
  for (Scheme scheme : {Scheme::CG, Scheme::DG}) {
    ExperimentConfig cs = c;
    cs.scheme = scheme;
    cs.penalty = a;
    validate_common(cs);
    PointResult pr = solve_point(cs, c.ns[0], c.kappas[0], a, ms);
    if (!pr.solved)
      throw SolverError("patch-test solve failed: " + pr.failure);
    result.runs.emplace_back(scheme, pr.report);
  }
  return result;
}

bool PatchResult::passed(double tol) const {
  for (const auto& [scheme, rep] : runs)
    if (!(rep.err_sigma <= tol && rep.err_rotation <= tol)) return false;
  return !runs.empty();
}

CsvTable PatchResult::table() const {
  std::ostringstream out;
  out << "scheme,e_sigma,e_rot\n";
  for (const auto& [scheme, rep] : runs)
    out << (scheme == Scheme::CG ? "cg" : "dg") << ","
        << format_sci3(rep.err_sigma) << "," << format_sci3(rep.err_rotation)
        << "\n";
  return {out.str()};
}

}  // namespace elastdg

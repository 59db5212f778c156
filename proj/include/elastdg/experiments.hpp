#pragma once

#include <optional>
#include <string>
#include <vector>

#include "elastdg/errors.hpp"
#include "elastdg/model.hpp"
#include "elastdg/spaces.hpp"
#include "elastdg/types.hpp"

namespace elastdg {

enum class ExperimentKind { convergence, penalty, locking, patch };

/// One benchmark run. Validation happens in the run_* entry points;
/// independent (kappa, n, a) points execute in configuration order so
/// reruns are byte-identical.
struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::convergence;
  Scheme scheme = Scheme::CG;
  int k = 2;
  std::vector<double> kappas;
  std::vector<int> ns;
  std::optional<double> penalty;  // DG only
  LameParams params;
  std::vector<double> a_grid;  // penalty sweep
  int quad_bump = 0;
  bool allow_large = false;
  std::string out_path;
};

/// Desk-scale guard: configurations above this estimated system size
/// need the explicit allow_large opt-in.
inline constexpr long kDeskScaleDofLimit = 520000;
long estimate_dofs(Scheme scheme, int k, int n);

struct PointResult {
  int n = 0;
  double a = 0.0;  // penalty sweep only
  bool solved = false;
  std::string failure;  // solver message when !solved
  ErrorReport report;
};

/// Plain CSV text: '.' decimal, errors in 3-significand scientific
/// notation, one header row. Rates are recomputed from the rounded error
/// entries so the emitted table is self-consistent.
struct CsvTable {
  std::string text;
};

struct ConvergenceStudy {
  ExperimentConfig config;
  std::vector<std::vector<PointResult>> points;  // [kappa][n]
  bool any_failed = false;

  CsvTable sigma_table() const;
  CsvTable rotation_table() const;
};

ConvergenceStudy run_convergence(const ExperimentConfig& config);

/// Nearly incompressible study: a DG convergence run whose material is
/// given through (E, nu); same table layout.
ConvergenceStudy run_locking(const ExperimentConfig& config);

struct PenaltySweep {
  ExperimentConfig config;
  std::vector<PointResult> points;  // one per grid value of a
  bool any_failed = false;

  CsvTable table() const;  // a, e_sigma, e_rot; failures marked
};

PenaltySweep run_penalty_sweep(const ExperimentConfig& config);

struct PatchResult {
  ExperimentConfig config;
  std::vector<std::pair<Scheme, ErrorReport>> runs;

  bool passed(double tol = 1e-8) const;
  CsvTable table() const;
};

/// Polynomial exact solution contained in the discrete spaces; both
/// schemes must reproduce it to solver accuracy.
PatchResult run_patch(const ExperimentConfig& config);

/// Helpers shared by the CLI and the tables.
std::string format_sci3(double v);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace elastdg

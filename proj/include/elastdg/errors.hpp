#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "elastdg/mesh.hpp"
#include "elastdg/model.hpp"
#include "elastdg/solve.hpp"
#include "elastdg/spaces.hpp"

namespace elastdg {

/// Absolute numerator norms of the stress error. For CG solutions the
/// jump part is identically zero; for DG it is the scaled normal-jump
/// seminorm over interior and Sigma faces.
struct ErrorBreakdown {
  double l2 = 0.0;
  double div = 0.0;
  double jump = 0.0;
  double total() const;
};

struct ErrorReport {
  double err_sigma = 0.0;     // relative, H(div) (CG) or broken norm (DG)
  double err_rotation = 0.0;  // relative L2 of the scalar rotation
  ErrorBreakdown sigma_parts;
  double norm_sigma_hdiv = 0.0;  // denominator ||sigma||_{H(div)}
  double norm_rotation = 0.0;
};

/// Relative errors of a discrete solution against the exact fields,
/// measured with quadrature of degree 2k+6 plus the optional bump.
ErrorReport measure_errors(const Mesh& mesh, const DofMap& map,
                           const DiscreteSolution& sol,
                           const ManufacturedSolution& ms, int quad_bump = 0);

/// ||h_F^{-1/2} [[sigma_h]]|| over interior and Sigma faces for a discrete
/// stress field of either scheme (zero to roundoff for CG fields).
double dg_jump_seminorm(const Mesh& mesh, const DofMap& map,
                        const Eigen::VectorXd& stress, int quad_bump = 0);

/// Residuals of the weak symmetry constraint: max over rotation basis
/// functions s of |int sigma_h : skew(s)| normalized by ||sigma_h||_0.
double weak_symmetry_residual(const Mesh& mesh, const DofMap& map,
                              const Eigen::VectorXd& stress, int quad_bump = 0);

/// Experimental convergence rates r = log(e/e_next) / log(h/h_next),
/// attached to the finer row; the first entry has no rate.
std::vector<std::optional<double>> convergence_rates(
    const std::vector<std::pair<double, double>>& h_and_error);

}  // namespace elastdg

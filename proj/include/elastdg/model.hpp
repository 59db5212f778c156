#pragma once

#include <functional>

#include "elastdg/types.hpp"

namespace elastdg {

/// Isotropic Lame constants. Plane-strain convention throughout: the 2D
/// stiffness is C tau = lambda tr(tau) I + 2 mu tau with the 2D trace.
struct LameParams {
  double lambda = 1.0;
  double mu = 1.0;
};

/// Conversion from Young modulus and Poisson ratio (plane strain).
LameParams lame_from_poisson(double E, double nu);

/// kappa = sqrt(rho) * omega; the formulation degenerates at kappa = 0,
/// so only strictly positive values are admitted.
struct WaveNumber {
  explicit WaveNumber(double k) : value(k) {
    if (!(k > 0)) throw DomainError("wave number must be positive");
  }
  double value;
};

Mat2 elasticity_apply(const LameParams& p, const Mat2& tau);  // C tau

/// Inverse law: C^{-1} tau = tau/(2 mu) + c_tr tr(tau) I with
/// c_tr = 1/(2(2 lambda + 2 mu)) - 1/(4 mu). The trace coefficient stays
/// bounded as lambda -> infinity.
Mat2 compliance_apply(const LameParams& p, const Mat2& tau);

/// Scalar factors of the compliance pairing
/// C^{-1} sigma : tau = dev_factor * (sigma:tau)
///                    + trace_factor * tr(sigma) tr(tau).
struct ComplianceCoefficients {
  double dev_factor;
  double trace_factor;
};
ComplianceCoefficients compliance_coefficients(const LameParams& p);

/// Closed-form exact fields of a manufactured problem: displacement u,
/// stress sigma = C eps(u), its divergence, the scalar rotation
/// r = (d1 u2 - d2 u1)/2, and the body force F = div sigma + kappa^2 u.
/// The Dirichlet datum g is u restricted to the boundary. All callables
/// are pure; the struct is freely copyable and thread-safe.
struct ManufacturedSolution {
  std::function<Vec2(const Vec2&)> u;
  std::function<Mat2(const Vec2&)> grad_u;  // (i,j) = d u_i / d x_j
  std::function<Mat2(const Vec2&)> sigma;
  std::function<Vec2(const Vec2&)> div_sigma;
  std::function<double(const Vec2&)> rotation;
  std::function<Vec2(const Vec2&)> body_force;

  Vec2 dirichlet(const Vec2& x) const { return u(x); }
};

/// The benchmark solution u = (-x2 sin(kappa pi x1), pi/2 x2 cos(kappa pi x1)).
ManufacturedSolution exact_fields(WaveNumber kappa, const LameParams& params);

/// Dense bivariate polynomial sum c[i][j] x^i y^j, used to build exact
/// polynomial solutions for patch tests.
class Poly2 {
 public:
  Poly2() : deg_(0), c_(1, 1) { c_.setZero(); }
  explicit Poly2(int degree) : deg_(degree), c_(degree + 1, degree + 1) { c_.setZero(); }

  static Poly2 constant(double v);
  static Poly2 affine(double cx, double cy, double c0);  // cx*x + cy*y + c0
  Poly2 pow(int e) const;

  double& coeff(int i, int j) { return c_(i, j); }
  double eval(const Vec2& x) const;
  Poly2 dx() const;
  Poly2 dy() const;

  Poly2 operator+(const Poly2& o) const;
  Poly2 operator*(const Poly2& o) const;
  Poly2 operator*(double s) const;

 private:
  int deg_;
  Eigen::MatrixXd c_;
};

/// Exact polynomial solution with u in P_k(Omega)^2, so that the discrete
/// spaces of degree k contain (sigma, r) exactly. Deterministic fields.
ManufacturedSolution polynomial_fields(int k, WaveNumber kappa,
                                       const LameParams& params);

}  // namespace elastdg

#include "elastdg/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace elastdg {

namespace {

struct Rule1d {
  Eigen::VectorXd points;   // on [-1,1]
  Eigen::VectorXd weights;
};

// Golub-Welsch: nodes are the eigenvalues of the Jacobi matrix built from
// the three-term recurrence, weights come from the first eigenvector rows.
Rule1d golub_welsch(const Eigen::VectorXd& diag, const Eigen::VectorXd& offdiag,
                    double mu0) {
  const int m = static_cast<int>(diag.size());
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(m, m);
  for (int i = 0; i < m; ++i) {
    J(i, i) = diag[i];
    if (i + 1 < m) {
      J(i, i + 1) = offdiag[i];
      J(i + 1, i) = offdiag[i];
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  Rule1d rule;
  rule.points = es.eigenvalues();
  rule.weights.resize(m);
  for (int i = 0; i < m; ++i) {
    const double v0 = es.eigenvectors()(0, i);
    rule.weights[i] = mu0 * v0 * v0;
  }
  return rule;
}

// Weight 1 on [-1,1].
Rule1d gauss_legendre(int m) {
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(m);
  Eigen::VectorXd off(m > 1 ? m - 1 : 0);
  for (int j = 1; j < m; ++j) off[j - 1] = j / std::sqrt(4.0 * j * j - 1.0);
  return golub_welsch(diag, off, 2.0);
}

// Weight (1-x) on [-1,1], i.e. Jacobi alpha=1, beta=0.
Rule1d gauss_jacobi10(int m) {
  Eigen::VectorXd diag(m);
  Eigen::VectorXd off(m > 1 ? m - 1 : 0);
  diag[0] = -1.0 / 3.0;
  for (int j = 1; j < m; ++j) {
    diag[j] = -1.0 / ((2.0 * j + 1.0) * (2.0 * j + 3.0));
    off[j - 1] = std::sqrt(j * (j + 1.0)) / (2.0 * j + 1.0);
  }
  return golub_welsch(diag, off, 2.0);
}

int points_for_degree(int degree) {
  if (degree < 0 || degree > kMaxQuadratureDegree)
    throw ConfigError("quadrature degree " + std::to_string(degree) +
                      " outside supported range [0," +
                      std::to_string(kMaxQuadratureDegree) + "]");
  return degree / 2 + 1;  // m Gauss points are exact through degree 2m-1
}

}  // namespace

QuadratureRule triangle_rule(int degree) {
  const int m = points_for_degree(degree);
  const Rule1d ga = gauss_legendre(m);
  const Rule1d gb = gauss_jacobi10(m);

  QuadratureRule rule;
  rule.points.resize(m * m, 2);
  rule.weights.resize(m * m);
  rule.exactness_degree = 2 * m - 1;
  int q = 0;
  for (int j = 0; j < m; ++j) {
    const double b = gb.points[j];
    for (int i = 0; i < m; ++i) {
      const double a = ga.points[i];
      // x = (1+a)(1-b)/4, y = (1+b)/2 maps [-1,1]^2 onto the triangle;
      // the (1-b) Jacobi weight absorbs the collapsed-edge Jacobian.
      rule.points(q, 0) = 0.25 * (1.0 + a) * (1.0 - b);
      rule.points(q, 1) = 0.5 * (1.0 + b);
      rule.weights[q] = 0.125 * ga.weights[i] * gb.weights[j];
      ++q;
    }
  }
  return rule;
}

QuadratureRule edge_rule(int degree) {
  const int m = points_for_degree(degree);
  const Rule1d g = gauss_legendre(m);
  QuadratureRule rule;
  rule.points.setZero(m, 2);
  rule.weights.resize(m);
  rule.exactness_degree = 2 * m - 1;
  for (int i = 0; i < m; ++i) {
    rule.points(i, 0) = 0.5 * (1.0 + g.points[i]);
    rule.weights[i] = 0.5 * g.weights[i];
  }
  return rule;
}

}  // namespace elastdg

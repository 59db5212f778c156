#include "elastdg/basis.hpp"

#include <cmath>
#include <vector>

namespace elastdg {

ScalarBasis::ScalarBasis(int degree) : degree_(degree), dim_(poly_space_dim(degree)) {
  if (degree < 0) throw ConfigError("negative basis degree");
}

void ScalarBasis::evaluate(const Eigen::Matrix<double, Eigen::Dynamic, 2>& points,
                           Eigen::MatrixXd* values, Eigen::MatrixXd* ddx,
                           Eigen::MatrixXd* ddy) const {
  const int npts = static_cast<int>(points.rows());
  const int k = degree_;
  if (values) values->resize(npts, dim_);
  if (ddx) ddx->resize(npts, dim_);
  if (ddy) ddy->resize(npts, dim_);

  // S_m(u,w) = w^m P_m(u/w) with u = 2x+y-1, w = 1-y is polynomial in
  // (x,y); the Legendre recurrence carries over as
  // (m+1) S_{m+1} = (2m+1) u S_m - m w^2 S_{m-1}.
  std::vector<double> S(k + 1), Su(k + 1), Sw(k + 1);
  std::vector<double> J(k + 1), Jd(k + 1);

  for (int p = 0; p < npts; ++p) {
    const double x = points(p, 0), y = points(p, 1);
    const double u = 2.0 * x + y - 1.0;
    const double w = 1.0 - y;
    const double z = 2.0 * y - 1.0;

    S[0] = 1.0; Su[0] = 0.0; Sw[0] = 0.0;
    if (k >= 1) { S[1] = u; Su[1] = 1.0; Sw[1] = 0.0; }
    for (int m = 1; m < k; ++m) {
      const double c1 = (2.0 * m + 1.0) / (m + 1.0);
      const double c2 = static_cast<double>(m) / (m + 1.0);
      S[m + 1] = c1 * u * S[m] - c2 * w * w * S[m - 1];
      Su[m + 1] = c1 * (S[m] + u * Su[m]) - c2 * w * w * Su[m - 1];
      Sw[m + 1] = c1 * u * Sw[m] - c2 * (2.0 * w * S[m - 1] + w * w * Sw[m - 1]);
    }

    int col = 0;
    for (int d = 0; d <= k; ++d) {
      for (int m = 0; m <= d; ++m) {
        const int n = d - m;
        // Jacobi P_n^{(a,0)}(z), a = 2m+1, by the three-term recurrence;
        // the z-derivative follows the differentiated recurrence.
        const double a = 2.0 * m + 1.0;
        J[0] = 1.0; Jd[0] = 0.0;
        if (n >= 1) { J[1] = 0.5 * ((a + 2.0) * z + a); Jd[1] = 0.5 * (a + 2.0); }
        for (int i = 1; i < n; ++i) {
          const double A = 2.0 * (i + 1.0) * (i + a + 1.0) * (2.0 * i + a);
          const double B = (2.0 * i + a + 1.0) * (2.0 * i + a + 2.0) * (2.0 * i + a);
          const double C = (2.0 * i + a + 1.0) * a * a;
          const double D = 2.0 * (i + a) * i * (2.0 * i + a + 2.0);
          J[i + 1] = ((B * z + C) * J[i] - D * J[i - 1]) / A;
          Jd[i + 1] = ((B * z + C) * Jd[i] + B * J[i] - D * Jd[i - 1]) / A;
        }
        const double c = std::sqrt(2.0 * (2.0 * m + 1.0) * (m + n + 1.0));
        if (values) (*values)(p, col) = c * S[m] * J[n];
        if (ddx) (*ddx)(p, col) = c * 2.0 * Su[m] * J[n];
        if (ddy)
          (*ddy)(p, col) = c * ((Su[m] - Sw[m]) * J[n] + S[m] * 2.0 * Jd[n]);
        ++col;
      }
    }
  }
}

Eigen::VectorXd legendre01(int degree, double t) {
  Eigen::VectorXd vals(degree + 1);
  const double z = 2.0 * t - 1.0;
  double pm1 = 1.0, p = z;
  vals[0] = 1.0;
  if (degree >= 1) vals[1] = std::sqrt(3.0) * z;
  for (int i = 1; i < degree; ++i) {
    const double pnext = ((2.0 * i + 1.0) * z * p - i * pm1) / (i + 1.0);
    pm1 = p;
    p = pnext;
    vals[i + 1] = std::sqrt(2.0 * i + 3.0) * pnext;
  }
  return vals;
}

}  // namespace elastdg

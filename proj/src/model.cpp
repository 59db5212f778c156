#include "elastdg/model.hpp"

#include <cmath>

namespace elastdg {

LameParams lame_from_poisson(double E, double nu) {
  if (!(E > 0)) throw DomainError("Young modulus must be positive");
  if (!(nu > 0.0 && nu < 0.5))
    throw DomainError("Poisson ratio must lie in (0, 1/2)");
  LameParams p;
  p.lambda = E * nu / ((1.0 + nu) * (1.0 - 2.0 * nu));
  p.mu = E / (2.0 * (1.0 + nu));
  return p;
}

Mat2 elasticity_apply(const LameParams& p, const Mat2& tau) {
  return p.lambda * tau.trace() * Mat2::Identity() + 2.0 * p.mu * tau;
}

ComplianceCoefficients compliance_coefficients(const LameParams& p) {
  ComplianceCoefficients c;
  c.dev_factor = 1.0 / (2.0 * p.mu);
  c.trace_factor = 1.0 / (2.0 * (2.0 * p.lambda + 2.0 * p.mu)) - 1.0 / (4.0 * p.mu);
  return c;
}

Mat2 compliance_apply(const LameParams& p, const Mat2& tau) {
  const auto c = compliance_coefficients(p);
  return c.dev_factor * tau + c.trace_factor * tau.trace() * Mat2::Identity();
}

ManufacturedSolution exact_fields(WaveNumber kappa, const LameParams& params) {
  const double k = kappa.value;
  const double beta = k * M_PI;           // argument scale of sin/cos
  const double lam = params.lambda, mu = params.mu;
  const double k2 = k * k;

  ManufacturedSolution ms;
  ms.u = [beta](const Vec2& x) {
    return Vec2(-x.y() * std::sin(beta * x.x()),
                0.5 * M_PI * x.y() * std::cos(beta * x.x()));
  };
  ms.grad_u = [beta](const Vec2& x) {
    const double s = std::sin(beta * x.x()), c = std::cos(beta * x.x());
    Mat2 g;
    g(0, 0) = -x.y() * beta * c;
    g(0, 1) = -s;
    g(1, 0) = -0.5 * M_PI * x.y() * beta * s;
    g(1, 1) = 0.5 * M_PI * c;
    return g;
  };
  ms.sigma = [beta, lam, mu](const Vec2& x) {
    const double s = std::sin(beta * x.x()), c = std::cos(beta * x.x());
    Mat2 sig;
    sig(0, 0) = c * (lam * 0.5 * M_PI - (lam + 2.0 * mu) * beta * x.y());
    sig(1, 1) = c * ((lam + 2.0 * mu) * 0.5 * M_PI - lam * beta * x.y());
    sig(0, 1) = sig(1, 0) = -mu * s * (1.0 + 0.5 * M_PI * beta * x.y());
    return sig;
  };
  ms.div_sigma = [beta, lam, mu](const Vec2& x) {
    const double s = std::sin(beta * x.x()), c = std::cos(beta * x.x());
    return Vec2(s * ((lam + 2.0 * mu) * beta * beta * x.y() -
                     (lam + mu) * 0.5 * M_PI * beta),
                -beta * c * ((lam + mu) + 0.5 * M_PI * beta * mu * x.y()));
  };
  ms.rotation = [beta](const Vec2& x) {
    const double s = std::sin(beta * x.x());
    return 0.5 * s * (1.0 - 0.5 * M_PI * beta * x.y());
  };
  ms.body_force = [ms, k2](const Vec2& x) -> Vec2 {
    return ms.div_sigma(x) + k2 * ms.u(x);
  };
  return ms;
}

Poly2 Poly2::constant(double v) {
  Poly2 p(0);
  p.c_(0, 0) = v;
  return p;
}

Poly2 Poly2::affine(double cx, double cy, double c0) {
  Poly2 p(1);
  p.c_(1, 0) = cx;
  p.c_(0, 1) = cy;
  p.c_(0, 0) = c0;
  return p;
}

Poly2 Poly2::pow(int e) const {
  Poly2 out = Poly2::constant(1.0);
  for (int i = 0; i < e; ++i) out = out * (*this);
  return out;
}

double Poly2::eval(const Vec2& x) const {
  // Horner in x, then y.
  double acc = 0.0;
  for (int i = deg_; i >= 0; --i) {
    double row = 0.0;
    for (int j = deg_; j >= 0; --j) row = row * x.y() + c_(i, j);
    acc = acc * x.x() + row;
  }
  return acc;
}

Poly2 Poly2::dx() const {
  Poly2 out(std::max(deg_ - 1, 0));
  for (int i = 1; i <= deg_; ++i)
    for (int j = 0; j <= deg_ - 1; ++j) out.c_(i - 1, j) = i * c_(i, j);
  return out;
}

Poly2 Poly2::dy() const {
  Poly2 out(std::max(deg_ - 1, 0));
  for (int i = 0; i <= deg_ - 1; ++i)
    for (int j = 1; j <= deg_; ++j) out.c_(i, j - 1) = j * c_(i, j);
  return out;
}

Poly2 Poly2::operator+(const Poly2& o) const {
  Poly2 out(std::max(deg_, o.deg_));
  out.c_.topLeftCorner(deg_ + 1, deg_ + 1) = c_;
  out.c_.topLeftCorner(o.deg_ + 1, o.deg_ + 1) += o.c_;
  return out;
}

Poly2 Poly2::operator*(const Poly2& o) const {
  Poly2 out(deg_ + o.deg_);
  for (int i = 0; i <= deg_; ++i)
    for (int j = 0; j <= deg_; ++j) {
      if (c_(i, j) == 0.0) continue;
      for (int a = 0; a <= o.deg_; ++a)
        for (int b = 0; b <= o.deg_; ++b)
          out.c_(i + a, j + b) += c_(i, j) * o.c_(a, b);
    }
  return out;
}

Poly2 Poly2::operator*(double s) const {
  Poly2 out = *this;
  out.c_ *= s;
  return out;
}

ManufacturedSolution polynomial_fields(int k, WaveNumber kappa,
                                       const LameParams& params) {
  if (k < 1) throw ConfigError("patch-test degree must be >= 1");
  const double k2 = kappa.value * kappa.value;

  // Generic affine directions keep all stress components active.
  const Poly2 u1 = Poly2::affine(0.9, 0.6, 0.2).pow(k);
  const Poly2 u2 = Poly2::affine(0.4, -0.8, 0.5).pow(k);

  const Poly2 d1u1 = u1.dx(), d2u1 = u1.dy();
  const Poly2 d1u2 = u2.dx(), d2u2 = u2.dy();

  const double lam = params.lambda, mu = params.mu;
  const Poly2 tr_eps = d1u1 + d2u2;
  const Poly2 s11 = tr_eps * lam + d1u1 * (2.0 * mu);
  const Poly2 s22 = tr_eps * lam + d2u2 * (2.0 * mu);
  const Poly2 s12 = (d2u1 + d1u2) * mu;
  const Poly2 div1 = s11.dx() + s12.dy();
  const Poly2 div2 = s12.dx() + s22.dy();
  const Poly2 rot = (d1u2 + d2u1 * (-1.0)) * 0.5;
  const Poly2 f1 = div1 + u1 * k2;
  const Poly2 f2 = div2 + u2 * k2;

  ManufacturedSolution ms;
  ms.u = [u1, u2](const Vec2& x) { return Vec2(u1.eval(x), u2.eval(x)); };
  ms.grad_u = [d1u1, d2u1, d1u2, d2u2](const Vec2& x) {
    Mat2 g;
    g << d1u1.eval(x), d2u1.eval(x), d1u2.eval(x), d2u2.eval(x);
    return g;
  };
  ms.sigma = [s11, s12, s22](const Vec2& x) {
    Mat2 s;
    s << s11.eval(x), s12.eval(x), s12.eval(x), s22.eval(x);
    return s;
  };
  ms.div_sigma = [div1, div2](const Vec2& x) {
    return Vec2(div1.eval(x), div2.eval(x));
  };
  ms.rotation = [rot](const Vec2& x) { return rot.eval(x); };
  ms.body_force = [f1, f2](const Vec2& x) { return Vec2(f1.eval(x), f2.eval(x)); };
  return ms;
}

}  // namespace elastdg

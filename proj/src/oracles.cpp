#include "pwdg/oracles.hpp"

#include <cmath>
#include <limits>

namespace pwdg {

TwoLayerCoefficients two_layer_coefficients(double k, double theta, cplx eps2, double H) {
  if (!(k > 0.0) || !(H > 0.0)) throw Error(ErrorKind::InvalidArgument, "k and H must be positive");
  const double c = std::cos(theta), sn = std::sin(theta);
  const cplx z = eps2 - c * c;
  if (std::abs(z) < 1e-14) throw Error(ErrorKind::DegenerateBranch, "ε2 = cos²θ");
  cplx s = std::sqrt(z);
  if (s.imag() < 0.0) s = -s;
  const cplx ep = std::exp(kI * k * H * s), em = std::exp(-kI * k * H * s);
  // unknowns (R, T1, T2)
  Eigen::Matrix3cd A;
  Eigen::Vector3cd b;
  A << 1.0, -1.0, -1.0,
       -sn, s, -s,
       0.0, ep, em;
  b << -1.0, -sn, 0.0;
  const Eigen::Vector3cd x = A.fullPivLu().solve(b);
  TwoLayerCoefficients out;
  out.R = x(0);
  out.T1 = x(1);
  out.T2 = x(2);
  out.s = s;
  out.k = k;
  out.theta = theta;
  out.H = H;
  out.eps2 = eps2;
  return out;
}

FieldValue two_layer_field(const Vec2& x, const TwoLayerCoefficients& c) {
  const double cs = std::cos(c.theta), sn = std::sin(c.theta);
  const cplx ik = kI * c.k;
  const cplx ex = std::exp(ik * cs * x.x());
  FieldValue f;
  if (x.y() >= 0.0) {
    const cplx up = std::exp(ik * sn * x.y()), dn = std::exp(-ik * sn * x.y());
    f.value = ex * (up + c.R * dn);
    f.grad << ik * cs * f.value, ex * ik * sn * (up - c.R * dn);
  } else {
    const cplx a = std::exp(-ik * c.s * x.y()), b = std::exp(ik * c.s * x.y());
    f.value = ex * (c.T1 * a + c.T2 * b);
    f.grad << ik * cs * f.value, ex * ik * c.s * (-c.T1 * a + c.T2 * b);
  }
  return f;
}

double two_layer_residual(const TwoLayerCoefficients& c) {
  const double sn = std::sin(c.theta);
  const cplx r1 = 1.0 + c.R - c.T1 - c.T2;
  const cplx r2 = (1.0 - c.R) * sn - (c.T2 - c.T1) * c.s;
  const cplx r3 = c.T1 * std::exp(kI * c.k * c.H * c.s) + c.T2 * std::exp(-kI * c.k * c.H * c.s);
  return std::max({std::abs(r1), std::abs(r2), std::abs(r3)});
}

namespace {

void check_envelope(double nu, double x) {
  if (!(nu >= 0.0 && nu <= 5.0 && x >= 0.0 && x <= 100.0))
    throw Error(ErrorKind::OutOfEnvelope, "Bessel evaluation outside ν∈[0,5], x∈[0,100]");
}

}  // namespace

double bessel_j(double nu, double x) {
  check_envelope(nu, x);
  if (x == 0.0) return nu == 0.0 ? 1.0 : 0.0;
  return std::cyl_bessel_j(nu, x);
}

double bessel_j_derivative(double nu, double x) {
  check_envelope(nu, x);
  if (x == 0.0) {
    if (nu == 0.0 || nu > 1.0) return 0.0;
    if (nu == 1.0) return 0.5;
    return std::numeric_limits<double>::infinity();
  }
  return nu / x * std::cyl_bessel_j(nu, x) - std::cyl_bessel_j(nu + 1.0, x);
}

FieldValue circular_wave(const Vec2& x, double xi, double k) {
  const double r = x.norm();
  FieldValue f;
  if (r == 0.0) {
    if (xi < 1.0) throw Error(ErrorKind::SingularOrigin, "gradient singular at the origin");
    f.value = bessel_j(xi, 0.0);
    if (xi == 1.0) f.grad << 0.5 * k, 0.0;
    return f;
  }
  const double th = std::atan2(x.y(), x.x());
  const double J = bessel_j(xi, k * r), dJ = bessel_j_derivative(xi, k * r);
  const double c = std::cos(xi * th), s = std::sin(xi * th);
  const double ur = k * dJ * c;          // ∂u/∂r
  const double ut = -xi * J * s / r;     // (1/r) ∂u/∂θ
  f.value = J * c;
  f.grad << ur * std::cos(th) - ut * std::sin(th), ur * std::sin(th) + ut * std::cos(th);
  return f;
}

BoundaryData impedance_data_from_exact(FieldFn exact) {
  return [exact = std::move(exact)](const Vec2& x, const Vec2& n, cplx kappa) {
    const FieldValue u = exact(x);
    return u.grad(0) * n.x() + u.grad(1) * n.y() - kI * kappa * u.value;
  };
}

}  // namespace pwdg

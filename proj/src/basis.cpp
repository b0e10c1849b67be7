#include "pwdg/basis.hpp"

#include <cmath>

namespace pwdg {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::InterfaceCrossing: return "InterfaceCrossing";
    case ErrorKind::PeriodicMismatch: return "PeriodicMismatch";
    case ErrorKind::MeshGeneration: return "MeshGeneration";
    case ErrorKind::WoodAnomaly: return "WoodAnomaly";
    case ErrorKind::FaceNotOnTop: return "FaceNotOnTop";
    case ErrorKind::SingularMatrix: return "SingularMatrix";
    case ErrorKind::PointOutsideDomain: return "PointOutsideDomain";
    case ErrorKind::OutOfEnvelope: return "OutOfEnvelope";
    case ErrorKind::SingularOrigin: return "SingularOrigin";
    case ErrorKind::DegenerateBranch: return "DegenerateBranch";
    case ErrorKind::ConfigError: return "ConfigError";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

std::vector<Vec2> direction_set(int p) {
  if (p < 1) throw Error(ErrorKind::InvalidArgument, "direction count must be >= 1");
  std::vector<Vec2> d;
  d.reserve(p);
  for (int j = 1; j <= p; ++j) {
    const double t = kTwoPi * j / p;
    d.emplace_back(std::cos(t), std::sin(t));
  }
  return d;
}

namespace {

// exp(z) - 1 without cancellation for small |z|.
cplx expm1_c(cplx z) {
  const double x = z.real(), y = z.imag();
  const double s = std::sin(0.5 * y);
  const double re = std::expm1(x) * std::cos(y) - 2.0 * s * s;
  const double im = std::exp(x) * std::sin(y);
  return {re, im};
}

}  // namespace

cplx psi(cplx z) {
  if (std::abs(z) < 1e-4) {
    // 1 + z/2 + z^2/6 + z^3/24 + z^4/120 + z^5/720
    return 1.0 + z * (1.0 / 2 + z * (1.0 / 6 + z * (1.0 / 24 + z * (1.0 / 120 + z / 720.0))));
  }
  return expm1_c(z) / z;
}

cplx edge_exp_integral(const Vec2& a, const Vec2& b, const CVec2& c) {
  const Vec2 t = b - a;
  return t.norm() * std::exp(dot(a, c)) * psi(dot(t, c));
}

LineRule gauss_legendre(int n) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "Gauss-Legendre order must be >= 1");
  LineRule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int m = 2; m <= n; ++m) {
        const double p2 = ((2.0 * m - 1.0) * x * p1 - (m - 1.0) * p0) / m;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) { p1 = x; p0 = 1.0; }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // recompute derivative at converged node
    double p0 = 1.0, p1 = x;
    for (int m = 2; m <= n; ++m) {
      const double p2 = ((2.0 * m - 1.0) * x * p1 - (m - 1.0) * p0) / m;
      p0 = p1;
      p1 = p2;
    }
    dp = (n == 1) ? 1.0 : n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.nodes[i] = 0.5 * (1.0 - x);
    r.nodes[n - 1 - i] = 0.5 * (1.0 + x);
    r.weights[i] = r.weights[n - 1 - i] = 0.5 * w;
  }
  return r;
}

FieldValue plane_wave(cplx kappa, const Vec2& d, const Vec2& x) {
  FieldValue f;
  f.value = std::exp(kI * kappa * d.dot(x));
  f.grad = (kI * kappa * f.value) * d.cast<cplx>();
  return f;
}

FieldValue conj_test_wave(cplx kappa, const Vec2& d, const Vec2& x) {
  FieldValue f;
  f.value = std::exp(-kI * kappa * d.dot(x));
  f.grad = (-kI * kappa * f.value) * d.cast<cplx>();
  return f;
}

void FluxParams::validate() const {
  if (!(alpha > 0.0) || !(beta > 0.0) || !(delta > 0.0 && delta <= 0.5))
    throw Error(ErrorKind::InvalidArgument, "flux parameters need alpha>0, beta>0, 0<delta<=1/2");
}

PlaneWaveSpace::PlaneWaveSpace(int p, double k, std::vector<cplx> element_kappa)
    : p_(p), k_(k), dirs_(direction_set(p)), kappa_(std::move(element_kappa)) {
  if (!(k > 0.0)) throw Error(ErrorKind::InvalidArgument, "wavenumber must be positive");
}

cplx wavenumber(double k, cplx eps) { return k * std::sqrt(eps); }

}  // namespace pwdg

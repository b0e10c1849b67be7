#include "pwdg/dtn.hpp"

#include <cmath>

#include "pwdg/basis.hpp"

namespace pwdg {

cplx DtnSpec::kappa_plus() const { return k * std::sqrt(eps_plus); }

void DtnSpec::validate() const {
  if (M < 0) throw Error(ErrorKind::InvalidArgument, "truncation index M must be >= 0");
  if (!(k > 0.0)) throw Error(ErrorKind::InvalidArgument, "wavenumber must be positive");
  if (!(H > 0.0)) throw Error(ErrorKind::InvalidArgument, "half-height must be positive");
  if (eps_plus.imag() < 0.0)
    throw Error(ErrorKind::InvalidArgument, "upper permittivity must have Im >= 0");
  for (int n = -M; n <= M; ++n) mode_beta(n, *this);
}

std::string DtnSpec::truncation_warning() const {
  const double k2 = k * k * eps_plus.real();
  if (alpha(M) * alpha(M) > k2 && alpha(-M) * alpha(-M) > k2) return {};
  return "truncation M=" + std::to_string(M) + " does not include all propagating modes";
}

cplx mode_beta(int n, const DtnSpec& spec) {
  const double an = spec.alpha(n);
  const cplx z = spec.k * spec.k * spec.eps_plus - an * an;
  if (std::abs(z) < 1e-12 * spec.k * spec.k)
    throw Error(ErrorKind::WoodAnomaly, "mode " + std::to_string(n) + " is grazing");
  if (z.imag() == 0.0) {
    return z.real() > 0.0 ? cplx(std::sqrt(z.real()), 0.0) : cplx(0.0, std::sqrt(-z.real()));
  }
  cplx w = std::sqrt(z);
  if (w.imag() < 0.0) w = -w;
  return w;
}

Trace apply_dtn(const Trace& trace, const DtnSpec& spec) {
  Trace out;
  for (const auto& [n, c] : trace)
    if (std::abs(n) <= spec.M) out[n] = kI * mode_beta(n, spec) * c;
  return out;
}

cplx evaluate_trace(const Trace& trace, double x1, const DtnSpec& spec) {
  cplx s = 0.0;
  for (const auto& [n, c] : trace) s += c * std::exp(kI * spec.alpha(n) * x1);
  return s;
}

cplx dtn_form(const Trace& u, const Trace& v, const DtnSpec& spec) {
  cplx s = 0.0;
  for (const auto& [n, c] : apply_dtn(u, spec)) {
    auto it = v.find(n);
    if (it != v.end()) s += c * std::conj(it->second);
  }
  return kTwoPi * s;
}

namespace {

void check_top(const Vec2& a, const Vec2& b, const DtnSpec& spec) {
  const double tol = 1e-10 * std::max(1.0, spec.H);
  if (std::abs(a.y() - spec.H) > tol || std::abs(b.y() - spec.H) > tol)
    throw Error(ErrorKind::FaceNotOnTop, "face does not lie on x2 = H");
}

// (1/2π) ∫_{p1}^{p2} exp(λ x1) exp(c·(x1, H)) dx1
cplx top_moment(const Vec2& a, const Vec2& b, const CVec2& c, cplx lambda, const DtnSpec& spec) {
  check_top(a, b, spec);
  const double p1 = std::min(a.x(), b.x()), p2 = std::max(a.x(), b.x());
  const cplx z = c.x() + lambda;
  return std::exp(c.y() * spec.H) * (p2 - p1) * std::exp(z * p1) * psi(z * (p2 - p1)) / kTwoPi;
}

}  // namespace

cplx exp_fourier_coefficient(const Vec2& a, const Vec2& b, const CVec2& c, int n,
                             const DtnSpec& spec) {
  return top_moment(a, b, c, -kI * spec.alpha(n), spec);
}

cplx trace_fourier_coefficient(const Vec2& a, const Vec2& b, cplx kappa, const Vec2& d, int n,
                               const DtnSpec& spec) {
  const CVec2 c = (kI * kappa) * d.cast<cplx>();
  return top_moment(a, b, c, -kI * spec.alpha(n), spec);
}

cplx test_fourier_coefficient(const Vec2& a, const Vec2& b, cplx kappa, const Vec2& d, int n,
                              const DtnSpec& spec) {
  const CVec2 c = (-kI * kappa) * d.cast<cplx>();
  return top_moment(a, b, c, kI * spec.alpha(n), spec);
}

DtnCoupling dtn_coupling_from_coefficients(const std::vector<cplx>& trial_coef,
                                           const std::vector<cplx>& test_coef,
                                           const std::vector<cplx>& beta, const DtnSpec& spec) {
  DtnCoupling out;
  for (int i = 0; i <= 2 * spec.M; ++i) {
    const cplx w = kTwoPi * trial_coef[i] * test_coef[i];
    const cplx b = beta[i];
    out.t_u_v += kI * b * w;
    out.t_u_t_v += std::norm(b) * w;
    out.u_t_v += -kI * std::conj(b) * w;
  }
  return out;
}

DtnCoupling dtn_coupling_block(const TopFace& face_l, cplx kappa_l, const Vec2& d_l,
                               const TopFace& face_j, cplx kappa_j, const Vec2& d_j,
                               const DtnSpec& spec) {
  const int n_modes = 2 * spec.M + 1;
  std::vector<cplx> tr(n_modes), te(n_modes), beta(n_modes);
  for (int n = -spec.M; n <= spec.M; ++n) {
    tr[n + spec.M] = trace_fourier_coefficient(face_l.a, face_l.b, kappa_l, d_l, n, spec);
    te[n + spec.M] = test_fourier_coefficient(face_j.a, face_j.b, kappa_j, d_j, n, spec);
    beta[n + spec.M] = mode_beta(n, spec);
  }
  return dtn_coupling_from_coefficients(tr, te, beta, spec);
}

}  // namespace pwdg

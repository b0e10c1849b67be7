#include <cmath>

#include "pwdg/solve.hpp"

namespace pwdg {

namespace {

// Sum of exponentials Σ a_i exp(c_i·x) restricted to a face.
struct Term {
  cplx a;
  CVec2 c;
};

double sq_integral(const std::vector<Term>& terms, const Vec2& a, const Vec2& b) {
  cplx s = 0.0;
  for (const auto& t : terms)
    for (const auto& u : terms) s += t.a * std::conj(u.a) * edge_exp_integral(a, b, t.c + u.c.conjugate());
  return s.real();
}

void append_element(std::vector<Term>& out, const DiscreteSolution& w, int e, cplx scale,
                    const Vec2* normal, double shift) {
  const cplx kap = w.space().kappa(e);
  for (int l = 0; l < w.space().p(); ++l) {
    const Vec2& d = w.space().direction(l);
    const CVec2 c = (kI * kap) * d.cast<cplx>();
    cplx a = scale * w.coefficients()(w.layout().dof(e, l));
    if (shift != 0.0) a *= std::exp(-kI * kap * d.x() * shift);
    if (normal) a *= dot(*normal, c);
    out.push_back({a, c});
  }
}

// Jump terms ξ^{-1}β |[∂n w]|² + ξα |[w]|² across a face; the neighbour may be shifted by
// one period with Bloch factor.
double jump_terms(const DiscreteSolution& w, const FluxParams& flux, int f, int K, int Kp,
                  const Vec2& a, const Vec2& b, double shift, cplx bloch) {
  const Vec2 n = w.mesh().normal(f, K);
  const double xi = 0.5 * (w.space().kappa(K).real() + w.space().kappa(Kp).real());
  std::vector<Term> val, der;
  append_element(val, w, K, 1.0, nullptr, 0.0);
  append_element(val, w, Kp, -bloch, nullptr, shift);
  append_element(der, w, K, 1.0, &n, 0.0);
  append_element(der, w, Kp, -bloch, &n, shift);
  return flux.beta / xi * sq_integral(der, a, b) + flux.alpha * xi * sq_integral(val, a, b);
}

double boundary_terms(const DiscreteSolution& w, const FluxParams& flux, int f) {
  const Mesh& m = w.mesh();
  const Face& fc = m.face(f);
  const Vec2 a = m.vertex(fc.v0), b = m.vertex(fc.v1);
  const Vec2 n = m.normal(f, fc.owner);
  const double kap = w.space().kappa(fc.owner).real();
  std::vector<Term> val;
  append_element(val, w, fc.owner, 1.0, nullptr, 0.0);
  if (fc.tag == FaceTag::DirichletBottom) return kap * flux.alpha * sq_integral(val, a, b);
  std::vector<Term> der;
  append_element(der, w, fc.owner, 1.0, &n, 0.0);
  return flux.delta / kap * sq_integral(der, a, b) + kap * (1.0 - flux.delta) * sq_integral(val, a, b);
}

}  // namespace

double tdg_norm(const DiscreteSolution& w, const FluxParams& flux) {
  const Mesh& m = w.mesh();
  double s = 0.0;
  for (int f = 0; f < m.num_faces(); ++f) {
    const Face& fc = m.face(f);
    switch (fc.tag) {
      case FaceTag::Interior:
        s += jump_terms(w, flux, f, fc.owner, fc.neighbor, m.vertex(fc.v0), m.vertex(fc.v1), 0.0, 1.0);
        break;
      case FaceTag::Robin:
      case FaceTag::DirichletBottom:
        s += boundary_terms(w, flux, f);
        break;
      default:
        throw Error(ErrorKind::InvalidArgument, "TDG norm needs an impedance mesh");
    }
  }
  return std::sqrt(std::max(s, 0.0));
}

Trace top_trace(const DiscreteSolution& w, const DtnSpec& spec) {
  const Mesh& m = w.mesh();
  Trace t;
  for (int n = -spec.M; n <= spec.M; ++n) t[n] = 0.0;
  for (int f : m.faces_with_tag(FaceTag::TopDtN)) {
    const Face& fc = m.face(f);
    const cplx kap = w.space().kappa(fc.owner);
    for (int l = 0; l < w.space().p(); ++l) {
      const cplx c = w.coefficients()(w.layout().dof(fc.owner, l));
      for (int n = -spec.M; n <= spec.M; ++n)
        t[n] += c * trace_fourier_coefficient(m.vertex(fc.v0), m.vertex(fc.v1), kap,
                                              w.space().direction(l), n, spec);
    }
  }
  return t;
}

cplx dtn_top_form(const DiscreteSolution& w, const DtnSpec& spec) {
  const Trace t = top_trace(w, spec);
  return dtn_form(t, t, spec);
}

double tdg_t_norm(const DiscreteSolution& w, const FluxParams& flux, const DtnSpec& spec) {
  const Mesh& m = w.mesh();
  const double P = m.period();
  const cplx bloch = std::exp(kI * spec.alpha0 * P);
  double s = 0.0;
  for (int f = 0; f < m.num_faces(); ++f) {
    const Face& fc = m.face(f);
    if (fc.tag == FaceTag::Interior) {
      s += jump_terms(w, flux, f, fc.owner, fc.neighbor, m.vertex(fc.v0), m.vertex(fc.v1), 0.0, 1.0);
    } else if (fc.tag == FaceTag::DirichletBottom) {
      s += boundary_terms(w, flux, f);
    } else if (fc.tag == FaceTag::PeriodicPair && m.vertex(fc.v0).x() > 0.5 * P) {
      const int L = m.face(fc.partner).owner;
      s += jump_terms(w, flux, f, fc.owner, L, m.vertex(fc.v0), m.vertex(fc.v1), P, bloch);
    } else if (fc.tag == FaceTag::Robin) {
      throw Error(ErrorKind::InvalidArgument, "TDG_T norm needs a strip mesh");
    }
  }
  // δ κ^{-1} ||∂n w - T_M w||² on the top boundary.
  const Trace W = top_trace(w, spec);
  const Trace TW = apply_dtn(W, spec);
  const int M = spec.M;
  for (int f : m.faces_with_tag(FaceTag::TopDtN)) {
    const Face& fc = m.face(f);
    const Vec2 a = m.vertex(fc.v0), b = m.vertex(fc.v1);
    const Vec2 n(0.0, 1.0);
    std::vector<Term> der;
    append_element(der, w, fc.owner, 1.0, &n, 0.0);
    const double a1 = sq_integral(der, a, b);
    cplx cross = 0.0;
    for (int k = -M; k <= M; ++k) {
      cplx dk = 0.0;
      for (const auto& t : der) dk += t.a * exp_fourier_coefficient(a, b, t.c, k, spec);
      cross += kTwoPi * dk * std::conj(TW.at(k));
    }
    std::vector<cplx> G(4 * M + 1);
    for (int q = -2 * M; q <= 2 * M; ++q) G[q + 2 * M] = edge_exp_integral(a, b, CVec2(kI * double(q), 0.0));
    cplx a3 = 0.0;
    for (int k = -M; k <= M; ++k)
      for (int l = -M; l <= M; ++l) a3 += TW.at(k) * std::conj(TW.at(l)) * G[k - l + 2 * M];
    const double kap = w.space().kappa(fc.owner).real();
    s += flux.delta / kap * (a1 - 2.0 * cross.real() + a3.real());
  }
  return std::sqrt(std::max(s, 0.0));
}

cplx quadratic_form(const Eigen::SparseMatrix<cplx>& A, const Eigen::VectorXcd& w) {
  const Eigen::VectorXcd Aw = A * w;
  return w.dot(Aw);
}

}  // namespace pwdg

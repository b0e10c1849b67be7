#pragma once

#include <map>
#include <string>
#include <vector>

#include "pwdg/types.hpp"

namespace pwdg {

// Truncated Dirichlet-to-Neumann map on the line x2 = H for quasi-periodic fields
// with phase α0: T_M sends the n-th Fourier mode u_n e^{iα_n x1} to iβ_n u_n e^{iα_n x1}, |n| <= M.
struct DtnSpec {
  int M = 100;
  double k = 1.0;
  cplx eps_plus = 1.0;
  double alpha0 = 0.0;
  double H = 1.0;

  double alpha(int n) const { return alpha0 + n; }
  cplx kappa_plus() const;
  void validate() const;
  // Non-empty when some propagating mode lies outside |n| <= M.
  std::string truncation_warning() const;
};

// β_n with Im β_n >= 0 (real and positive for propagating modes).
cplx mode_beta(int n, const DtnSpec& spec);

// Sparse Fourier representation of a quasi-periodic trace: n -> coefficient of e^{iα_n x1}.
using Trace = std::map<int, cplx>;

Trace apply_dtn(const Trace& trace, const DtnSpec& spec);
cplx evaluate_trace(const Trace& trace, double x1, const DtnSpec& spec);
// ∫_0^{2π} T_M u conj(v) dx1.
cplx dtn_form(const Trace& u, const Trace& v, const DtnSpec& spec);

// (1/2π) ∫_F e^{-iα_n x1} exp(c·x) dx1 over a top face F = [a, b].
cplx exp_fourier_coefficient(const Vec2& a, const Vec2& b, const CVec2& c, int n, const DtnSpec& spec);

// Fourier coefficient of the trial plane wave exp(iκ d·x) restricted to the top face [a, b].
cplx trace_fourier_coefficient(const Vec2& a, const Vec2& b, cplx kappa, const Vec2& d, int n,
                               const DtnSpec& spec);

// (1/2π) ∫_F e^{iα_n x1} conj(v) dx1 for the test function paired with (κ, d).
cplx test_fourier_coefficient(const Vec2& a, const Vec2& b, cplx kappa, const Vec2& d, int n,
                              const DtnSpec& spec);

// Three DtN integrals over Γ_H for trial φ_l on face_l and test v_j on face_j:
//   t_u_v   = ∫ T_M φ_l conj(v_j)
//   t_u_t_v = ∫ T_M φ_l conj(T_M v_j)
//   u_t_v   = ∫ φ_l conj(T_M v_j)
struct DtnCoupling {
  cplx t_u_v{0.0, 0.0};
  cplx t_u_t_v{0.0, 0.0};
  cplx u_t_v{0.0, 0.0};
};

struct TopFace {
  Vec2 a, b;
};

DtnCoupling dtn_coupling_block(const TopFace& face_l, cplx kappa_l, const Vec2& d_l,
                               const TopFace& face_j, cplx kappa_j, const Vec2& d_j,
                               const DtnSpec& spec);

// Same sums from precomputed coefficient vectors indexed by n + M.
DtnCoupling dtn_coupling_from_coefficients(const std::vector<cplx>& trial_coef,
                                           const std::vector<cplx>& test_coef,
                                           const std::vector<cplx>& beta, const DtnSpec& spec);

}  // namespace pwdg

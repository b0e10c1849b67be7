#pragma once

#include <vector>

#include "pwdg/types.hpp"

namespace pwdg {

// Unit directions d_j = (cos 2πj/p, sin 2πj/p), j = 1..p.
std::vector<Vec2> direction_set(int p);

// (e^z - 1)/z, continuous at z = 0.
cplx psi(cplx z);

// ∫_[a,b] exp(x·c) dS for a complex vector c, in closed form.
cplx edge_exp_integral(const Vec2& a, const Vec2& b, const CVec2& c);

// Gauss–Legendre rule on [0, 1].
struct LineRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
LineRule gauss_legendre(int n);

// Trial plane wave exp(iκ d·x) and its gradient.
FieldValue plane_wave(cplx kappa, const Vec2& d, const Vec2& x);

// Complex conjugate of the test function paired with trial direction d: exp(-iκ d·x).
// For real κ this is the plain conjugate of the trial function.
FieldValue conj_test_wave(cplx kappa, const Vec2& d, const Vec2& x);

struct FluxParams {
  double alpha = 0.5;
  double beta = 0.5;
  double delta = 0.5;

  static FluxParams uwvf() { return {}; }
  void validate() const;
};

// Per-element plane-wave space: p directions shared by all elements,
// element wavenumber κ_K = k sqrt(ε_K) (principal root).
class PlaneWaveSpace {
 public:
  PlaneWaveSpace(int p, double k, std::vector<cplx> element_kappa);

  int p() const { return p_; }
  double k() const { return k_; }
  const std::vector<Vec2>& directions() const { return dirs_; }
  const Vec2& direction(int j) const { return dirs_[j]; }
  cplx kappa(int element) const { return kappa_[element]; }
  int num_elements() const { return static_cast<int>(kappa_.size()); }

 private:
  int p_;
  double k_;
  std::vector<Vec2> dirs_;
  std::vector<cplx> kappa_;
};

cplx wavenumber(double k, cplx eps);

}  // namespace pwdg

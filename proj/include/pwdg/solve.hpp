#pragma once

#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pwdg/assembly.hpp"

namespace pwdg {

struct SolveOptions {
  int dense_limit = 2000;         // dense LU up to this size, sparse LU above
  double residual_warn = 1e-8;    // relative residual triggering a conditioning warning
  double condition_warn = 1e12;   // condition estimate triggering a conditioning warning
};

struct SolveResult {
  Eigen::VectorXcd x;
  double residual = 0.0;                 // ||Ax - b|| / ||b||
  std::optional<double> condition;       // 1-norm condition estimate (dense path)
  bool conditioning_warning = false;
  std::string method;                    // "dense-lu" or "sparse-lu"
};

SolveResult solve(const LinearSystem& sys, const SolveOptions& opts = {});

// Piecewise plane-wave field given by coefficients in a DofLayout.
class DiscreteSolution {
 public:
  DiscreteSolution(std::shared_ptr<const Mesh> mesh, std::shared_ptr<const PlaneWaveSpace> space,
                   DofLayout layout, Eigen::VectorXcd coefficients);

  const Mesh& mesh() const { return *mesh_; }
  const PlaneWaveSpace& space() const { return *space_; }
  const DofLayout& layout() const { return layout_; }
  const Eigen::VectorXcd& coefficients() const { return coef_; }

  // Field of element e evaluated at x (x need not lie in e).
  FieldValue evaluate_in(int e, const Vec2& x) const;
  // Lowest-index element containing x; throws PointOutsideDomain.
  int locate(const Vec2& x) const;
  FieldValue evaluate(const Vec2& x) const { return evaluate_in(locate(x), x); }

 private:
  std::shared_ptr<const Mesh> mesh_;
  std::shared_ptr<const PlaneWaveSpace> space_;
  DofLayout layout_;
  Eigen::VectorXcd coef_;
  // uniform bucket grid for point location
  double x0_ = 0, y0_ = 0, bw_ = 1, bh_ = 1;
  int nbx_ = 1, nby_ = 1;
  std::vector<std::vector<int>> buckets_;
};

// Quadrature on the reference triangle (0,0),(1,0),(0,1); points as (x, y), weights sum to 1/2.
struct TriangleRule {
  std::vector<Vec2> points;
  std::vector<double> weights;
};
// Collapsed (Duffy) tensor Gauss–Legendre rule with n points per direction.
TriangleRule duffy_rule(int n);

struct ErrorReport {
  double l2_abs = 0, l2_rel = 0;
  double h1_semi_abs = 0, h1_semi_rel = 0;
  double h1_abs = 0, h1_rel = 0;
  int quadrature_order = 0;
};

ErrorReport error_norms(const DiscreteSolution& sol, const FieldFn& exact, int order = 10);

// Mesh-dependent seminorms. TDG: impedance problem; TDG_T: strip problem with DtN top.
double tdg_norm(const DiscreteSolution& w, const FluxParams& flux);
double tdg_t_norm(const DiscreteSolution& w, const FluxParams& flux, const DtnSpec& spec);
// ∫_{Γ_H} T_M w conj(w) dx1 for the trace of w on the top boundary.
cplx dtn_top_form(const DiscreteSolution& w, const DtnSpec& spec);
// Fourier coefficients of the trace of w on x2 = H, |n| <= M.
Trace top_trace(const DiscreteSolution& w, const DtnSpec& spec);

// w^H A w.
cplx quadratic_form(const Eigen::SparseMatrix<cplx>& A, const Eigen::VectorXcd& w);

// Samples the quasi-periodic continuation u(x + 2πm e1) = e^{2πiα0 m} u(x), m in [m_min, m_max].
class QuasiPeriodicSampler {
 public:
  QuasiPeriodicSampler(const DiscreteSolution& sol, double alpha0, int m_min, int m_max)
      : sol_(sol), alpha0_(alpha0), m_min_(m_min), m_max_(m_max) {}
  FieldValue operator()(const Vec2& x) const;

 private:
  const DiscreteSolution& sol_;
  double alpha0_;
  int m_min_, m_max_;
};

struct GridSample {
  double x1, x2;
  cplx value;
};

// nx × ny points, endpoints included.
std::vector<GridSample> sample_grid(const std::function<cplx(const Vec2&)>& f, double x_lo,
                                    double x_hi, double y_lo, double y_hi, int nx, int ny);
// "x1 x2 re im" rows.
void write_field(std::ostream& os, const std::vector<GridSample>& samples);

}  // namespace pwdg

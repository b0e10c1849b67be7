#include "pwdg/solve.hpp"

#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>

namespace pwdg {

SolveResult solve(const LinearSystem& sys, const SolveOptions& opts) {
  const int n = static_cast<int>(sys.A.rows());
  if (n == 0 || sys.A.cols() != n || sys.b.size() != n)
    throw Error(ErrorKind::InvalidArgument, "linear system has inconsistent dimensions");
  SolveResult res;
  if (n <= opts.dense_limit) {
    const Eigen::MatrixXcd Ad(sys.A);
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(Ad);
    const double rc = lu.rcond();
    res.x = lu.solve(sys.b);
    if (!(rc > 0.0) || !res.x.allFinite()) throw Error(ErrorKind::SingularMatrix, "dense LU failed");
    res.condition = 1.0 / rc;
    res.method = "dense-lu";
  } else {
    Eigen::SparseLU<Eigen::SparseMatrix<cplx>, Eigen::COLAMDOrdering<int>> lu;
    lu.analyzePattern(sys.A);
    lu.factorize(sys.A);
    if (lu.info() != Eigen::Success) throw Error(ErrorKind::SingularMatrix, lu.lastErrorMessage());
    res.x = lu.solve(sys.b);
    if (lu.info() != Eigen::Success || !res.x.allFinite())
      throw Error(ErrorKind::SingularMatrix, "sparse LU solve failed");
    res.method = "sparse-lu";
  }
  const double bn = sys.b.norm();
  const double rn = (sys.A * res.x - sys.b).norm();
  res.residual = bn > 0.0 ? rn / bn : rn;
  res.conditioning_warning =
      res.residual > opts.residual_warn || (res.condition && *res.condition > opts.condition_warn);
  return res;
}

DiscreteSolution::DiscreteSolution(std::shared_ptr<const Mesh> mesh,
                                   std::shared_ptr<const PlaneWaveSpace> space, DofLayout layout,
                                   Eigen::VectorXcd coefficients)
    : mesh_(std::move(mesh)), space_(std::move(space)), layout_(std::move(layout)),
      coef_(std::move(coefficients)) {
  if (coef_.size() != layout_.size())
    throw Error(ErrorKind::InvalidArgument, "coefficient vector does not match the layout");
  const auto& V = mesh_->vertices();
  double x1 = -1e300, y1 = -1e300;
  x0_ = y0_ = 1e300;
  for (const auto& v : V) {
    x0_ = std::min(x0_, v.x());
    y0_ = std::min(y0_, v.y());
    x1 = std::max(x1, v.x());
    y1 = std::max(y1, v.y());
  }
  const int ne = mesh_->num_elements();
  const int nb = std::max(1, static_cast<int>(std::sqrt(static_cast<double>(ne))));
  nbx_ = nby_ = nb;
  bw_ = std::max(x1 - x0_, 1e-300) / nbx_;
  bh_ = std::max(y1 - y0_, 1e-300) / nby_;
  buckets_.assign(static_cast<size_t>(nbx_) * nby_, {});
  for (int e = 0; e < ne; ++e) {
    const auto& el = mesh_->element(e);
    double ex0 = 1e300, ex1 = -1e300, ey0 = 1e300, ey1 = -1e300;
    for (int v : el.v) {
      ex0 = std::min(ex0, V[v].x());
      ex1 = std::max(ex1, V[v].x());
      ey0 = std::min(ey0, V[v].y());
      ey1 = std::max(ey1, V[v].y());
    }
    const double pad = 1e-9 * (bw_ + bh_);
    const int i0 = std::clamp(static_cast<int>(std::floor((ex0 - pad - x0_) / bw_)), 0, nbx_ - 1);
    const int i1 = std::clamp(static_cast<int>(std::floor((ex1 + pad - x0_) / bw_)), 0, nbx_ - 1);
    const int j0 = std::clamp(static_cast<int>(std::floor((ey0 - pad - y0_) / bh_)), 0, nby_ - 1);
    const int j1 = std::clamp(static_cast<int>(std::floor((ey1 + pad - y0_) / bh_)), 0, nby_ - 1);
    for (int j = j0; j <= j1; ++j)
      for (int i = i0; i <= i1; ++i) buckets_[j * nbx_ + i].push_back(e);
  }
}

FieldValue DiscreteSolution::evaluate_in(int e, const Vec2& x) const {
  FieldValue f;
  const cplx kap = space_->kappa(e);
  for (int j = 0; j < space_->p(); ++j) {
    const FieldValue b = plane_wave(kap, space_->direction(j), x);
    const cplx c = coef_(layout_.dof(e, j));
    f.value += c * b.value;
    f.grad += c * b.grad;
  }
  return f;
}

int DiscreteSolution::locate(const Vec2& x) const {
  const double pad = 1e-9 * (bw_ + bh_);
  const double fx = (x.x() - x0_) / bw_, fy = (x.y() - y0_) / bh_;
  if (!(fx >= -pad / bw_ && fx <= nbx_ + pad / bw_ && fy >= -pad / bh_ && fy <= nby_ + pad / bh_))
    throw Error(ErrorKind::PointOutsideDomain, "point outside the mesh bounding box");
  const int i = std::clamp(static_cast<int>(std::floor(fx)), 0, nbx_ - 1);
  const int j = std::clamp(static_cast<int>(std::floor(fy)), 0, nby_ - 1);
  for (int e : buckets_[j * nbx_ + i]) {
    const auto& el = mesh_->element(e);
    const Vec2& a = mesh_->vertex(el.v[0]);
    const Vec2& b = mesh_->vertex(el.v[1]);
    const Vec2& c = mesh_->vertex(el.v[2]);
    const double area2 = (b - a).x() * (c - a).y() - (b - a).y() * (c - a).x();
    const double l1 = ((x - a).x() * (c - a).y() - (x - a).y() * (c - a).x()) / area2;
    const double l2 = ((b - a).x() * (x - a).y() - (b - a).y() * (x - a).x()) / area2;
    const double tol = 1e-10;
    if (l1 >= -tol && l2 >= -tol && 1.0 - l1 - l2 >= -tol) return e;
  }
  throw Error(ErrorKind::PointOutsideDomain, "no element contains the point");
}

TriangleRule duffy_rule(int n) {
  const LineRule g = gauss_legendre(n);
  TriangleRule r;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const double s = g.nodes[a], t = g.nodes[b];
      r.points.emplace_back(s, t * (1.0 - s));
      r.weights.push_back(g.weights[a] * g.weights[b] * (1.0 - s));
    }
  return r;
}

ErrorReport error_norms(const DiscreteSolution& sol, const FieldFn& exact, int order) {
  if (order < 4) throw Error(ErrorKind::InvalidArgument, "quadrature order must be >= 4");
  const TriangleRule rule = duffy_rule(order);
  const Mesh& mesh = sol.mesh();
  double e0 = 0, e1 = 0, n0 = 0, n1 = 0;
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const auto& el = mesh.element(e);
    const Vec2& a = mesh.vertex(el.v[0]);
    const Vec2 ab = mesh.vertex(el.v[1]) - a, ac = mesh.vertex(el.v[2]) - a;
    const double jac = 2.0 * mesh.area(e);
    for (size_t q = 0; q < rule.points.size(); ++q) {
      const Vec2 x = a + rule.points[q].x() * ab + rule.points[q].y() * ac;
      const double w = rule.weights[q] * jac;
      const FieldValue uh = sol.evaluate_in(e, x);
      const FieldValue u = exact(x);
      e0 += w * std::norm(uh.value - u.value);
      e1 += w * (uh.grad - u.grad).squaredNorm();
      n0 += w * std::norm(u.value);
      n1 += w * u.grad.squaredNorm();
    }
  }
  ErrorReport r;
  r.quadrature_order = order;
  r.l2_abs = std::sqrt(e0);
  r.h1_semi_abs = std::sqrt(e1);
  r.h1_abs = std::sqrt(e0 + e1);
  r.l2_rel = n0 > 0 ? r.l2_abs / std::sqrt(n0) : r.l2_abs;
  r.h1_semi_rel = n1 > 0 ? r.h1_semi_abs / std::sqrt(n1) : r.h1_semi_abs;
  r.h1_rel = n0 + n1 > 0 ? r.h1_abs / std::sqrt(n0 + n1) : r.h1_abs;
  return r;
}

FieldValue QuasiPeriodicSampler::operator()(const Vec2& x) const {
  const double P = sol_.mesh().period();
  int m = static_cast<int>(std::floor(x.x() / P));
  double xr = x.x() - m * P;
  // the right edge of the last copy belongs to that copy
  if (m == m_max_ + 1 && std::abs(xr) < 1e-12 * P) {
    m -= 1;
    xr += P;
  }
  if (m < m_min_ || m > m_max_)
    throw Error(ErrorKind::PointOutsideDomain, "point outside the sampled periods");
  FieldValue f = sol_.evaluate(Vec2(xr, x.y()));
  const cplx ph = std::exp(kI * alpha0_ * P * static_cast<double>(m));
  f.value *= ph;
  f.grad *= ph;
  return f;
}

std::vector<GridSample> sample_grid(const std::function<cplx(const Vec2&)>& f, double x_lo,
                                    double x_hi, double y_lo, double y_hi, int nx, int ny) {
  if (nx < 2 || ny < 2) throw Error(ErrorKind::InvalidArgument, "grid needs at least 2x2 points");
  std::vector<GridSample> out;
  out.reserve(static_cast<size_t>(nx) * ny);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const double x = x_lo + (x_hi - x_lo) * i / (nx - 1);
      const double y = y_lo + (y_hi - y_lo) * j / (ny - 1);
      out.push_back({x, y, f(Vec2(x, y))});
    }
  return out;
}

void write_field(std::ostream& os, const std::vector<GridSample>& samples) {
  os << std::setprecision(17);
  for (const auto& s : samples)
    os << s.x1 << ' ' << s.x2 << ' ' << s.value.real() << ' ' << s.value.imag() << '\n';
}

}  // namespace pwdg

#include "pwdg/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <set>
#include <tuple>

namespace pwdg {

DofLayout::DofLayout(const Mesh& mesh, int p) : p_(p) {
  if (p < 1) throw Error(ErrorKind::InvalidArgument, "p must be >= 1");
  const int ne = mesh.num_elements();
  std::vector<char> top(ne, 0);
  for (int f : mesh.faces_with_tag(FaceTag::TopDtN)) top[mesh.face(f).owner] = 1;
  offset_.assign(ne, -1);
  int next = 0;
  for (int pass = 0; pass < 2; ++pass)
    for (int e = 0; e < ne; ++e)
      if (top[e] == (pass == 0 ? 1 : 0)) {
        offset_[e] = next;
        next += p;
      }
  size_ = next;
}

double IncidentWave::kappa() const { return k * std::sqrt(eps_plus); }
Vec2 IncidentWave::direction() const { return {std::cos(theta), std::sin(theta)}; }
FieldValue IncidentWave::operator()(const Vec2& x) const { return plane_wave(kappa(), direction(), x); }

FieldValue PlaneWaveField::operator()(const Vec2& x) const {
  FieldValue f = plane_wave(kappa, d, x);
  f.value *= amplitude;
  f.grad *= amplitude;
  return f;
}

std::vector<cplx> element_wavenumbers(const Mesh& mesh, double k) {
  std::vector<cplx> kap(mesh.num_elements());
  for (int e = 0; e < mesh.num_elements(); ++e) kap[e] = wavenumber(k, mesh.eps(e));
  return kap;
}

namespace {

CVec2 ic(cplx kappa, const Vec2& d) { return (kI * kappa) * d.cast<cplx>(); }

}  // namespace

Eigen::MatrixXcd face_block_same_element(const EdgeGeom& face, cplx kappa, double xi,
                                         const std::vector<Vec2>& dirs, const FluxParams& flux,
                                         FaceTag tag) {
  const int p = static_cast<int>(dirs.size());
  Eigen::MatrixXcd B(p, p);
  const double al = flux.alpha, be = flux.beta, de = flux.delta;
  for (int l = 0; l < p; ++l) {
    const double dl = dirs[l].dot(face.n);
    for (int j = 0; j < p; ++j) {
      const double dj = dirs[j].dot(face.n);
      const cplx I = edge_exp_integral(face.a, face.b, ic(kappa, dirs[l]) - ic(kappa, dirs[j]));
      cplx c;
      switch (tag) {
        case FaceTag::Interior:
        case FaceTag::PeriodicPair:
          c = -0.5 * kI * kappa * (dj + dl) - be * kI * kappa * kappa * dl * dj / xi - al * kI * xi;
          break;
        case FaceTag::Robin:
          c = kI * kappa * ((1.0 - de) * (-1.0 - dj) + de * dl * (-dj - 1.0));
          break;
        case FaceTag::DirichletBottom:
          c = kI * kappa * (-al - dl);
          break;
        default:
          throw Error(ErrorKind::InvalidArgument, "no same-element block for this face tag");
      }
      B(j, l) = c * I;
    }
  }
  return B;
}

Eigen::MatrixXcd face_block_adjacent(const EdgeGeom& face, cplx kappa_trial, cplx kappa_test,
                                     double xi, const std::vector<Vec2>& dirs,
                                     const FluxParams& flux) {
  const int p = static_cast<int>(dirs.size());
  Eigen::MatrixXcd B(p, p);
  for (int l = 0; l < p; ++l) {
    const double dl = dirs[l].dot(face.n);
    for (int j = 0; j < p; ++j) {
      const double dj = dirs[j].dot(face.n);
      const cplx I =
          edge_exp_integral(face.a, face.b, ic(kappa_trial, dirs[l]) - ic(kappa_test, dirs[j]));
      const cplx c = 0.5 * kI * (kappa_test * dj + kappa_trial * dl) +
                     flux.beta * kI * kappa_trial * kappa_test * dl * dj / xi + flux.alpha * kI * xi;
      B(j, l) = c * I;
    }
  }
  return B;
}

Eigen::MatrixXcd dtn_local_block(const EdgeGeom& face, cplx kappa, const std::vector<Vec2>& dirs,
                                 const FluxParams& flux) {
  const int p = static_cast<int>(dirs.size());
  Eigen::MatrixXcd B(p, p);
  for (int l = 0; l < p; ++l) {
    const double dl = dirs[l].dot(face.n);
    for (int j = 0; j < p; ++j) {
      const double dj = dirs[j].dot(face.n);
      const cplx I = edge_exp_integral(face.a, face.b, ic(kappa, dirs[l]) - ic(kappa, dirs[j]));
      B(j, l) = -kI * kappa * dj * (1.0 + flux.delta * dl) * I;
    }
  }
  return B;
}

namespace {

cplx rhs_weight(cplx kappa, double dj, const FluxParams& flux, FaceTag tag) {
  switch (tag) {
    case FaceTag::Robin: return flux.delta * (-dj - 1.0) + 1.0;
    case FaceTag::DirichletBottom: return kI * kappa * (-flux.alpha + dj);
    default: throw Error(ErrorKind::InvalidArgument, "impedance data only on Robin/Dirichlet faces");
  }
}

}  // namespace

Eigen::VectorXcd rhs_impedance_face(const EdgeGeom& face, cplx kappa, const std::vector<Vec2>& dirs,
                                    const FluxParams& flux, FaceTag tag, const BoundaryData& g,
                                    int gl_points) {
  const int p = static_cast<int>(dirs.size());
  const LineRule rule = gauss_legendre(gl_points);
  const double L = (face.b - face.a).norm();
  std::vector<Vec2> xs;
  std::vector<cplx> gw;
  for (int q = 0; q < gl_points; ++q) {
    const Vec2 x = face.a + rule.nodes[q] * (face.b - face.a);
    xs.push_back(x);
    gw.push_back(rule.weights[q] * L * g(x, face.n, kappa));
  }
  Eigen::VectorXcd r(p);
  for (int j = 0; j < p; ++j) {
    cplx s = 0.0;
    for (int q = 0; q < gl_points; ++q) s += gw[q] * std::exp(-kI * kappa * dirs[j].dot(xs[q]));
    r(j) = rhs_weight(kappa, dirs[j].dot(face.n), flux, tag) * s;
  }
  return r;
}

Eigen::VectorXcd rhs_impedance_face(const EdgeGeom& face, cplx kappa, const std::vector<Vec2>& dirs,
                                    const FluxParams& flux, FaceTag tag, const PlaneWaveField& u) {
  const int p = static_cast<int>(dirs.size());
  const cplx g_factor = tag == FaceTag::Robin
                            ? u.amplitude * kI * (u.kappa * u.d.dot(face.n) - kappa)
                            : u.amplitude;
  Eigen::VectorXcd r(p);
  for (int j = 0; j < p; ++j) {
    const cplx I = edge_exp_integral(face.a, face.b, ic(u.kappa, u.d) - ic(kappa, dirs[j]));
    r(j) = rhs_weight(kappa, dirs[j].dot(face.n), flux, tag) * g_factor * I;
  }
  return r;
}

namespace {

// Contributions are summed in a canonical order so the result is independent of traversal.
class Accumulator {
 public:
  Accumulator(const DofLayout& layout) : layout_(layout) {}

  void block(int test_e, int trial_e, const Eigen::MatrixXcd& B, int face, int seq) {
    for (int l = 0; l < B.cols(); ++l)
      for (int j = 0; j < B.rows(); ++j)
        mat_.push_back({layout_.dof(test_e, j), layout_.dof(trial_e, l), face, seq, B(j, l)});
  }
  void vec(int test_e, const Eigen::VectorXcd& r, int face, int seq) {
    for (int j = 0; j < r.size(); ++j) rhs_.push_back({layout_.dof(test_e, j), 0, face, seq, r(j)});
  }

  void finish(LinearSystem& sys) {
    auto key = [](const Item& a) { return std::tie(a.row, a.col, a.face, a.seq); };
    auto less = [&](const Item& a, const Item& b) { return key(a) < key(b); };
    std::sort(mat_.begin(), mat_.end(), less);
    std::sort(rhs_.begin(), rhs_.end(), less);
    std::vector<Eigen::Triplet<cplx>> trip;
    for (size_t i = 0; i < mat_.size();) {
      size_t k = i;
      cplx s = 0.0;
      for (; k < mat_.size() && mat_[k].row == mat_[i].row && mat_[k].col == mat_[i].col; ++k)
        s += mat_[k].v;
      trip.emplace_back(mat_[i].row, mat_[i].col, s);
      i = k;
    }
    const int n = layout_.size();
    sys.A.resize(n, n);
    sys.A.setFromTriplets(trip.begin(), trip.end());
    sys.A.makeCompressed();
    sys.b = Eigen::VectorXcd::Zero(n);
    for (const auto& it : rhs_) sys.b(it.row) += it.v;
    sys.layout = layout_;
  }

 private:
  struct Item {
    int row, col, face, seq;
    cplx v;
  };
  const DofLayout& layout_;
  std::vector<Item> mat_, rhs_;
};

EdgeGeom edge_of(const Mesh& mesh, int f, int e) {
  const Face& fc = mesh.face(f);
  return {mesh.vertex(fc.v0), mesh.vertex(fc.v1), mesh.normal(f, e)};
}

std::vector<int> traversal_order(const Mesh& mesh, const AssemblyOptions& opts) {
  if (opts.traversal.empty()) {
    std::vector<int> order(mesh.num_faces());
    for (int i = 0; i < mesh.num_faces(); ++i) order[i] = i;
    return order;
  }
  std::vector<int> sorted = opts.traversal;
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < mesh.num_faces(); ++i)
    if (static_cast<int>(sorted.size()) != mesh.num_faces() || sorted[i] != i)
      throw Error(ErrorKind::InvalidArgument, "traversal is not a permutation of the faces");
  return opts.traversal;
}

void check_space(const Mesh& mesh, const PlaneWaveSpace& space) {
  if (space.num_elements() != mesh.num_elements())
    throw Error(ErrorKind::InvalidArgument, "plane-wave space does not match the mesh");
}

void add_interior(Accumulator& acc, const Mesh& mesh, const PlaneWaveSpace& space,
                  const FluxParams& flux, int f) {
  const Face& fc = mesh.face(f);
  const int K = fc.owner, Kp = fc.neighbor;
  const cplx kK = space.kappa(K), kKp = space.kappa(Kp);
  const double xi = 0.5 * (kK.real() + kKp.real());
  const auto& dirs = space.directions();
  const EdgeGeom eK = edge_of(mesh, f, K);
  EdgeGeom eKp = eK;
  eKp.n = -eK.n;
  acc.block(K, K, face_block_same_element(eK, kK, xi, dirs, flux, FaceTag::Interior), f, 0);
  acc.block(Kp, Kp, face_block_same_element(eKp, kKp, xi, dirs, flux, FaceTag::Interior), f, 1);
  acc.block(Kp, K, face_block_adjacent(eK, kK, kKp, xi, dirs, flux), f, 2);
  acc.block(K, Kp, face_block_adjacent(eKp, kKp, kK, xi, dirs, flux), f, 3);
}

// Right face fr on x1 = 2π paired with left face fl on x1 = 0. Functions of the left element
// are continued to the right by u(x + 2π e1) = e^{2πiα0} u(x).
void add_periodic(Accumulator& acc, const Mesh& mesh, const PlaneWaveSpace& space,
                  const FluxParams& flux, int fl, int fr, double alpha0) {
  const int L = mesh.face(fl).owner, R = mesh.face(fr).owner;
  const cplx kL = space.kappa(L), kR = space.kappa(R);
  const double xi = 0.5 * (kL.real() + kR.real());
  const auto& dirs = space.directions();
  const int p = space.p();
  const EdgeGeom eL = edge_of(mesh, fl, L);
  const EdgeGeom eR = edge_of(mesh, fr, R);
  acc.block(R, R, face_block_same_element(eR, kR, xi, dirs, flux, FaceTag::Interior), fr, 0);
  acc.block(L, L, face_block_same_element(eL, kL, xi, dirs, flux, FaceTag::Interior), fr, 1);
  const double P = mesh.period();
  const cplx bloch = std::exp(kI * alpha0 * P);
  // trial on translated L, test on R (trial outward normal on the right face is -e1)
  EdgeGeom eT = eR;
  eT.n = -eR.n;
  Eigen::MatrixXcd B = face_block_adjacent(eT, kL, kR, xi, dirs, flux);
  for (int l = 0; l < p; ++l) B.col(l) *= bloch * std::exp(-kI * kL * dirs[l].x() * P);
  acc.block(R, L, B, fr, 2);
  // trial on R, test on translated L
  Eigen::MatrixXcd C = face_block_adjacent(eR, kR, kL, xi, dirs, flux);
  for (int j = 0; j < p; ++j) C.row(j) *= std::conj(bloch) * std::exp(kI * kL * dirs[j].x() * P);
  acc.block(L, R, C, fr, 3);
}

}  // namespace

LinearSystem assemble_impedance(const Mesh& mesh, const PlaneWaveSpace& space,
                                const FluxParams& flux, const ImpedanceData& data,
                                const AssemblyOptions& opts) {
  flux.validate();
  check_space(mesh, space);
  DofLayout layout(mesh, space.p());
  Accumulator acc(layout);
  const auto& dirs = space.directions();
  for (int f : traversal_order(mesh, opts)) {
    const Face& fc = mesh.face(f);
    switch (fc.tag) {
      case FaceTag::Interior:
        add_interior(acc, mesh, space, flux, f);
        break;
      case FaceTag::Robin:
      case FaceTag::DirichletBottom: {
        const int K = fc.owner;
        const cplx kap = space.kappa(K);
        const EdgeGeom e = edge_of(mesh, f, K);
        acc.block(K, K, face_block_same_element(e, kap, kap.real(), dirs, flux, fc.tag), f, 0);
        if (data.plane_wave) {
          acc.vec(K, rhs_impedance_face(e, kap, dirs, flux, fc.tag, *data.plane_wave), f, 0);
        } else {
          const BoundaryData& g = fc.tag == FaceTag::Robin ? data.robin : data.dirichlet;
          if (g) acc.vec(K, rhs_impedance_face(e, kap, dirs, flux, fc.tag, g, opts.gl_points), f, 0);
        }
        break;
      }
      default:
        throw Error(ErrorKind::InvalidArgument,
                    std::string("impedance assembly cannot handle face tag ") + to_string(fc.tag));
    }
  }
  LinearSystem sys;
  acc.finish(sys);
  return sys;
}

namespace {

// Top-boundary normal is e2, so d·n = d.y().
cplx global_entry(const DtnCoupling& c, const Vec2& dl, const Vec2& dj, cplx kappa_j, double delta) {
  return -(1.0 - delta * dj.y()) * c.t_u_v - delta * kI / kappa_j * c.t_u_t_v - delta * dl.y() * c.u_t_v;
}

cplx rhs_entry(cplx face_integral, cplx test_coef0, const Vec2& dj, cplx kappa_j, double delta,
               double beta_inc, cplx beta_mode0, double H) {
  return 2.0 * kI * beta_inc * (1.0 - delta * dj.y()) * face_integral +
         4.0 * kPi * kI * delta * beta_inc * std::conj(beta_mode0) / kappa_j * test_coef0 *
             std::exp(kI * beta_inc * H);
}

}  // namespace

cplx dtn_global_block(const TopFace& face_l, cplx kappa_l, const Vec2& d_l, const TopFace& face_j,
                      cplx kappa_j, const Vec2& d_j, double delta, const DtnSpec& spec) {
  return global_entry(dtn_coupling_block(face_l, kappa_l, d_l, face_j, kappa_j, d_j, spec), d_l, d_j,
                      kappa_j, delta);
}

cplx rhs_dtn(const TopFace& face, cplx kappa, const Vec2& d_j, double delta, const IncidentWave& incident,
             const DtnSpec& spec) {
  const cplx te0 = test_fourier_coefficient(face.a, face.b, kappa, d_j, 0, spec);
  const cplx I = edge_exp_integral(face.a, face.b, ic(incident.kappa(), incident.direction()) - ic(kappa, d_j));
  return rhs_entry(I, te0, d_j, kappa, delta, incident.beta0(), mode_beta(0, spec), spec.H);
}

LinearSystem assemble_dtn(const Mesh& mesh, const PlaneWaveSpace& space, const FluxParams& flux,
                          const IncidentWave& incident, const DtnSpec& spec,
                          const AssemblyOptions& opts) {
  flux.validate();
  spec.validate();
  check_space(mesh, space);
  if (mesh.mode() != BoundaryMode::Strip)
    throw Error(ErrorKind::InvalidArgument, "DtN assembly needs a strip mesh");
  if (std::abs(spec.H - mesh.H()) > 1e-12 * std::max(1.0, spec.H))
    throw Error(ErrorKind::InvalidArgument, "DtN height does not match the mesh");
  if (std::abs(spec.alpha0 - incident.alpha0()) > 1e-12 * std::max(1.0, std::abs(spec.alpha0)))
    throw Error(ErrorKind::InvalidArgument, "quasi-periodicity does not match the incident wave");
  if (!(incident.theta > -kPi && incident.theta < 0.0))
    throw Error(ErrorKind::InvalidArgument, "incident angle must lie in (-π, 0)");

  DofLayout layout(mesh, space.p());
  Accumulator acc(layout);
  LinearSystem sys;
  if (auto w = spec.truncation_warning(); !w.empty()) sys.warnings.push_back(w);
  const auto& dirs = space.directions();
  const int p = space.p();
  const std::vector<int> top = mesh.faces_with_tag(FaceTag::TopDtN);
  {
    std::set<std::pair<double, double>> kset;
    for (int f : top) kset.emplace(space.kappa(mesh.face(f).owner).real(), space.kappa(mesh.face(f).owner).imag());
    if (kset.size() > 1)
      sys.warnings.push_back("top boundary elements have different permittivities");
  }

  // Fourier data of every top trial and test function.
  const int nm = 2 * spec.M + 1;
  std::vector<cplx> beta(nm);
  for (int n = -spec.M; n <= spec.M; ++n) beta[n + spec.M] = mode_beta(n, spec);
  std::map<int, std::vector<std::vector<cplx>>> trial_coef, test_coef;
  for (int f : top) {
    const Face& fc = mesh.face(f);
    const Vec2 a = mesh.vertex(fc.v0), b = mesh.vertex(fc.v1);
    const cplx kap = space.kappa(fc.owner);
    auto& tr = trial_coef[f];
    auto& te = test_coef[f];
    tr.assign(p, std::vector<cplx>(nm));
    te.assign(p, std::vector<cplx>(nm));
    for (int j = 0; j < p; ++j)
      for (int n = -spec.M; n <= spec.M; ++n) {
        tr[j][n + spec.M] = trace_fourier_coefficient(a, b, kap, dirs[j], n, spec);
        te[j][n + spec.M] = test_fourier_coefficient(a, b, kap, dirs[j], n, spec);
      }
  }

  const double de = flux.delta;
  const double beta_inc = incident.beta0();
  const cplx beta_mode0 = mode_beta(0, spec);
  for (int f : traversal_order(mesh, opts)) {
    const Face& fc = mesh.face(f);
    switch (fc.tag) {
      case FaceTag::Interior:
        add_interior(acc, mesh, space, flux, f);
        break;
      case FaceTag::DirichletBottom: {
        const int K = fc.owner;
        const cplx kap = space.kappa(K);
        acc.block(K, K, face_block_same_element(edge_of(mesh, f, K), kap, kap.real(), dirs, flux, fc.tag), f, 0);
        break;
      }
      case FaceTag::PeriodicPair:
        if (mesh.vertex(fc.v0).x() > 0.5 * mesh.period())
          add_periodic(acc, mesh, space, flux, fc.partner, f, spec.alpha0);
        break;
      case FaceTag::TopDtN: {
        const int Kj = fc.owner;
        const cplx kj = space.kappa(Kj);
        const EdgeGeom e = edge_of(mesh, f, Kj);
        acc.block(Kj, Kj, dtn_local_block(e, kj, dirs, flux), f, 0);
        for (int fl : top) {
          const int Kl = mesh.face(fl).owner;
          Eigen::MatrixXcd B(p, p);
          for (int l = 0; l < p; ++l)
            for (int j = 0; j < p; ++j) {
              const DtnCoupling c = dtn_coupling_from_coefficients(trial_coef[fl][l], test_coef[f][j], beta, spec);
              B(j, l) = global_entry(c, dirs[l], dirs[j], kj, de);
            }
          acc.block(Kj, Kl, B, f, 1 + fl);
        }
        Eigen::VectorXcd r(p);
        const CVec2 cin = ic(incident.kappa(), incident.direction());
        for (int j = 0; j < p; ++j) {
          const cplx I = edge_exp_integral(e.a, e.b, cin - ic(kj, dirs[j]));
          r(j) = rhs_entry(I, test_coef[f][j][spec.M], dirs[j], kj, de, beta_inc, beta_mode0, spec.H);
        }
        acc.vec(Kj, r, f, 0);
        break;
      }
      case FaceTag::Robin:
        throw Error(ErrorKind::InvalidArgument, "Robin face in a DtN problem");
    }
  }
  acc.finish(sys);
  return sys;
}

void write_matrix(std::ostream& os, const Eigen::SparseMatrix<cplx>& A) {
  std::vector<std::tuple<int, int, cplx>> t;
  for (int c = 0; c < A.outerSize(); ++c)
    for (Eigen::SparseMatrix<cplx>::InnerIterator it(A, c); it; ++it)
      t.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
  std::sort(t.begin(), t.end(), [](const auto& a, const auto& b) {
    return std::tie(std::get<0>(a), std::get<1>(a)) < std::tie(std::get<0>(b), std::get<1>(b));
  });
  os << std::setprecision(17) << A.rows() << ' ' << t.size() << '\n';
  for (const auto& [r, c, v] : t) os << r << ' ' << c << ' ' << v.real() << ' ' << v.imag() << '\n';
}

}  // namespace pwdg

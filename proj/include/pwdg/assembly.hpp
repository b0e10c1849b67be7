#pragma once

#include <Eigen/Sparse>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "pwdg/basis.hpp"
#include "pwdg/dtn.hpp"
#include "pwdg/geometry.hpp"

namespace pwdg {

// Global numbering: elements touching the top boundary first (dense DtN coupling),
// then the rest; p consecutive unknowns per element.
class DofLayout {
 public:
  DofLayout() = default;
  DofLayout(const Mesh& mesh, int p);

  int dof(int element, int j) const { return offset_[element] + j; }
  int size() const { return size_; }
  int p() const { return p_; }
  int num_elements() const { return static_cast<int>(offset_.size()); }

 private:
  std::vector<int> offset_;
  int p_ = 0;
  int size_ = 0;
};

// Incident plane wave exp(iκ⁺ (x1 cos θ + x2 sin θ)), κ⁺ = k sqrt(ε⁺), θ in (-π, 0).
struct IncidentWave {
  double theta = -kPi / 4;
  double k = 1.0;
  double eps_plus = 1.0;

  double kappa() const;
  Vec2 direction() const;
  double alpha0() const { return kappa() * std::cos(theta); }
  double beta0() const { return kappa() * std::sin(theta); }
  FieldValue operator()(const Vec2& x) const;
};

struct EdgeGeom {
  Vec2 a, b;
  Vec2 n;  // outward unit normal of the trial element
};

// Block of A restricted to trial and test functions of one element on one face
// (rows: test index j, columns: trial index l). tag selects Interior, Robin or DirichletBottom.
Eigen::MatrixXcd face_block_same_element(const EdgeGeom& face, cplx kappa, double xi,
                                         const std::vector<Vec2>& dirs, const FluxParams& flux,
                                         FaceTag tag);

// Trial functions on the element with outward normal face.n, test functions on the other side.
Eigen::MatrixXcd face_block_adjacent(const EdgeGeom& face, cplx kappa_trial, cplx kappa_test,
                                     double xi, const std::vector<Vec2>& dirs,
                                     const FluxParams& flux);

// Local part of the top-boundary terms (same element).
Eigen::MatrixXcd dtn_local_block(const EdgeGeom& face, cplx kappa, const std::vector<Vec2>& dirs,
                                 const FluxParams& flux);

// Entry of the top-boundary coupling between trial (face_l, κ_l, d_l) and test
// (face_j, κ_j, d_j) through T_M; both faces lie on x2 = H.
cplx dtn_global_block(const TopFace& face_l, cplx kappa_l, const Vec2& d_l, const TopFace& face_j,
                      cplx kappa_j, const Vec2& d_j, double delta, const DtnSpec& spec);

// Load entry of the test function (κ, d_j) on a top face for the incident wave.
cplx rhs_dtn(const TopFace& face, cplx kappa, const Vec2& d_j, double delta, const IncidentWave& incident,
             const DtnSpec& spec);

// Plane-wave boundary datum A exp(iκ_w d_w·x); for Robin faces the datum is ∇u·n - iκu of it.
struct PlaneWaveField {
  cplx amplitude{1.0, 0.0};
  cplx kappa{1.0, 0.0};
  Vec2 d{1.0, 0.0};
  FieldValue operator()(const Vec2& x) const;
};

struct ImpedanceData {
  BoundaryData robin;      // g_R(x, n, κ)
  BoundaryData dirichlet;  // g_D(x, n, κ)
  // When set, the boundary datum is derived from this field in closed form.
  std::optional<PlaneWaveField> plane_wave;
};

Eigen::VectorXcd rhs_impedance_face(const EdgeGeom& face, cplx kappa, const std::vector<Vec2>& dirs,
                                    const FluxParams& flux, FaceTag tag, const BoundaryData& g,
                                    int gl_points);
Eigen::VectorXcd rhs_impedance_face(const EdgeGeom& face, cplx kappa, const std::vector<Vec2>& dirs,
                                    const FluxParams& flux, FaceTag tag, const PlaneWaveField& u);

struct LinearSystem {
  Eigen::SparseMatrix<cplx> A;
  Eigen::VectorXcd b;
  DofLayout layout;
  std::optional<double> condition_hint;
  std::vector<std::string> warnings;
};

struct AssemblyOptions {
  int gl_points = 10;
  // Face traversal order; empty means natural order. The result does not depend on it.
  std::vector<int> traversal;
};

LinearSystem assemble_impedance(const Mesh& mesh, const PlaneWaveSpace& space,
                                const FluxParams& flux, const ImpedanceData& data,
                                const AssemblyOptions& opts = {});

LinearSystem assemble_dtn(const Mesh& mesh, const PlaneWaveSpace& space, const FluxParams& flux,
                          const IncidentWave& incident, const DtnSpec& spec,
                          const AssemblyOptions& opts = {});

// Element wavenumbers κ_K = k sqrt(ε_K).
std::vector<cplx> element_wavenumbers(const Mesh& mesh, double k);

// "N nnz" header followed by "row col re im" lines (0-based).
void write_matrix(std::ostream& os, const Eigen::SparseMatrix<cplx>& A);

}  // namespace pwdg

#pragma once

#include <array>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "pwdg/types.hpp"

namespace pwdg {

enum class FaceTag { Interior, PeriodicPair, DirichletBottom, TopDtN, Robin };
const char* to_string(FaceTag tag);
FaceTag face_tag_from_string(const std::string& s);

struct Element {
  std::array<int, 3> v{};  // counter-clockwise
  int region = 0;
};

struct Face {
  int v0 = -1, v1 = -1;
  int owner = -1;     // lower-index adjacent element
  int neighbor = -1;  // -1 on the boundary
  FaceTag tag = FaceTag::Interior;
  int partner = -1;   // periodic partner face
};

// Layered material description of the strip [0, 2π] × [-H, H].
// Open polylines run from x1 = 0 to x1 = 2π with non-decreasing x1; region id of a
// point is the number of open polylines above it. Closed polygons (inside the strip)
// get ids after the layered regions, in list order.
struct InterfaceSpec {
  double H = 3.0;
  std::vector<std::vector<Vec2>> open_polylines;
  std::vector<std::vector<Vec2>> closed_polygons;
  std::map<int, cplx> region_eps;

  int num_regions() const;
  int region_of(const Vec2& x) const;
  void validate() const;
};

enum class BoundaryMode {
  Strip,     // periodic left/right, Dirichlet bottom, DtN top
  AllRobin,  // every boundary face carries an impedance condition
};

class Mesh {
 public:
  Mesh() = default;
  // Builds faces from element connectivity and classifies boundary faces.
  // In Strip mode the domain is [0, period] × [-H, H].
  Mesh(std::vector<Vec2> vertices, std::vector<Element> elements,
       std::map<int, cplx> region_eps, BoundaryMode mode, double H = 0.0,
       double period = kTwoPi);

  const std::vector<Vec2>& vertices() const { return vertices_; }
  const std::vector<Element>& elements() const { return elements_; }
  const std::vector<Face>& faces() const { return faces_; }
  const Vec2& vertex(int i) const { return vertices_[i]; }
  const Element& element(int e) const { return elements_[e]; }
  const Face& face(int f) const { return faces_[f]; }
  int num_elements() const { return static_cast<int>(elements_.size()); }
  int num_faces() const { return static_cast<int>(faces_.size()); }

  BoundaryMode mode() const { return mode_; }
  double H() const { return H_; }
  double period() const { return period_; }
  const std::map<int, cplx>& region_eps() const { return region_eps_; }
  cplx eps(int e) const;

  // Outward unit normal of face f with respect to element e.
  Vec2 normal(int f, int e) const;
  double face_length(int f) const;
  double area(int e) const;
  Vec2 barycenter(int e) const;
  // Diameter of the smallest enclosing circle of element e.
  double diameter(int e) const;
  double h() const;

  std::vector<int> faces_with_tag(FaceTag tag) const;
  // (left face, right face) for every periodic pair.
  std::vector<std::pair<int, int>> periodic_pairs() const;

  // Same triangulation with every boundary face tagged Robin.
  Mesh to_impedance() const;

 private:
  void build_faces();
  void classify();

  std::vector<Vec2> vertices_;
  std::vector<Element> elements_;
  std::vector<Face> faces_;
  std::map<int, cplx> region_eps_;
  BoundaryMode mode_ = BoundaryMode::AllRobin;
  double H_ = 0.0;
  double period_ = kTwoPi;
};

// Eight-triangle mesh of [0,1] × [-1/2, 1/2], all boundary faces Robin, ε = 1.
Mesh fixed_eight_triangle_mesh();

// Structured mesh of [x0,x1] × [y0,y1] with nx × ny squares split into two triangles.
Mesh rectangle_mesh(double x0, double x1, double y0, double y1, int nx, int ny, cplx eps = 1.0);

// Conforming, quasi-uniform triangulation of the strip [0, 2π] × [-H, H] that resolves
// the interfaces in spec, with matching vertices on x1 = 0 and x1 = 2π.
Mesh generate_periodic_mesh(const InterfaceSpec& spec, double h_target);

// Empty when the mesh satisfies all structural invariants.
std::vector<std::string> validate_mesh(const Mesh& mesh, const InterfaceSpec* spec = nullptr);

void write_mesh(std::ostream& os, const Mesh& mesh);
Mesh read_mesh(std::istream& is, const std::map<int, cplx>& region_eps);

}  // namespace pwdg

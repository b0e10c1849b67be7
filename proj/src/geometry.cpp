#include "pwdg/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace pwdg {

const char* to_string(FaceTag tag) {
  switch (tag) {
    case FaceTag::Interior: return "Interior";
    case FaceTag::PeriodicPair: return "PeriodicPair";
    case FaceTag::DirichletBottom: return "DirichletBottom";
    case FaceTag::TopDtN: return "TopDtN";
    case FaceTag::Robin: return "Robin";
  }
  return "Unknown";
}

FaceTag face_tag_from_string(const std::string& s) {
  for (FaceTag t : {FaceTag::Interior, FaceTag::PeriodicPair, FaceTag::DirichletBottom,
                    FaceTag::TopDtN, FaceTag::Robin})
    if (s == to_string(t)) return t;
  throw Error(ErrorKind::IoError, "unknown face tag '" + s + "'");
}

namespace {

// Height of an x1-monotone polyline at abscissa x; nullopt-like NaN outside its range.
double polyline_height(const std::vector<Vec2>& pl, double x) {
  for (size_t i = 0; i + 1 < pl.size(); ++i) {
    const Vec2& a = pl[i];
    const Vec2& b = pl[i + 1];
    if (b.x() > a.x() && x >= a.x() && x <= b.x()) {
      const double t = (x - a.x()) / (b.x() - a.x());
      return a.y() + t * (b.y() - a.y());
    }
  }
  return std::nan("");
}

bool point_in_polygon(const std::vector<Vec2>& poly, const Vec2& x) {
  bool inside = false;
  const size_t n = poly.size();
  for (size_t i = 0, j = n - 1; i < n; j = i++) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[j];
    if ((a.y() > x.y()) != (b.y() > x.y())) {
      const double xc = a.x() + (x.y() - a.y()) * (b.x() - a.x()) / (b.y() - a.y());
      if (x.x() < xc) inside = !inside;
    }
  }
  return inside;
}

double orient(const Vec2& a, const Vec2& b, const Vec2& c) {
  return (b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x());
}

bool segments_cross(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d, double eps) {
  const double o1 = orient(a, b, c), o2 = orient(a, b, d);
  const double o3 = orient(c, d, a), o4 = orient(c, d, b);
  return ((o1 > eps && o2 < -eps) || (o1 < -eps && o2 > eps)) &&
         ((o3 > eps && o4 < -eps) || (o3 < -eps && o4 > eps));
}

}  // namespace

int InterfaceSpec::num_regions() const {
  return static_cast<int>(open_polylines.size() + 1 + closed_polygons.size());
}

int InterfaceSpec::region_of(const Vec2& x) const {
  for (int i = static_cast<int>(closed_polygons.size()) - 1; i >= 0; --i)
    if (point_in_polygon(closed_polygons[i], x))
      return static_cast<int>(open_polylines.size()) + 1 + i;
  int above = 0;
  for (const auto& pl : open_polylines) {
    const double y = polyline_height(pl, x.x());
    if (!std::isnan(y) && y > x.y()) ++above;
  }
  return above;
}

void InterfaceSpec::validate() const {
  if (!(H > 0.0)) throw Error(ErrorKind::InvalidArgument, "strip half-height must be positive");
  const double tol = 1e-12 * kTwoPi;
  for (const auto& pl : open_polylines) {
    if (pl.size() < 2) throw Error(ErrorKind::InvalidArgument, "polyline needs >= 2 points");
    if (std::abs(pl.front().x()) > tol || std::abs(pl.back().x() - kTwoPi) > tol)
      throw Error(ErrorKind::InvalidArgument, "open polyline must span x1 in [0, 2π]");
    if (std::abs(pl.front().y() - pl.back().y()) > 1e-12)
      throw Error(ErrorKind::InvalidArgument, "open polyline must be periodic in x1");
    for (size_t i = 0; i + 1 < pl.size(); ++i) {
      if (pl[i + 1].x() < pl[i].x())
        throw Error(ErrorKind::InvalidArgument, "open polyline must be non-decreasing in x1");
      if ((pl[i + 1] - pl[i]).norm() == 0.0)
        throw Error(ErrorKind::InvalidArgument, "repeated polyline point");
    }
    for (const auto& p : pl)
      if (!(p.y() > -H && p.y() < H))
        throw Error(ErrorKind::InvalidArgument, "interface must stay strictly inside the strip");
  }
  for (const auto& poly : closed_polygons) {
    if (poly.size() < 3) throw Error(ErrorKind::InvalidArgument, "polygon needs >= 3 points");
    for (const auto& p : poly)
      if (!(p.x() > 0.0 && p.x() < kTwoPi && p.y() > -H && p.y() < H))
        throw Error(ErrorKind::InvalidArgument, "closed polygon must lie inside the strip");
  }
  // Pairwise segment crossings between distinct interfaces.
  std::vector<std::vector<std::pair<Vec2, Vec2>>> segs;
  for (const auto& pl : open_polylines) {
    segs.emplace_back();
    for (size_t i = 0; i + 1 < pl.size(); ++i) segs.back().emplace_back(pl[i], pl[i + 1]);
  }
  for (const auto& poly : closed_polygons) {
    segs.emplace_back();
    for (size_t i = 0; i < poly.size(); ++i)
      segs.back().emplace_back(poly[i], poly[(i + 1) % poly.size()]);
  }
  for (size_t a = 0; a < segs.size(); ++a)
    for (size_t b = a + 1; b < segs.size(); ++b)
      for (const auto& s : segs[a])
        for (const auto& t : segs[b])
          if (segments_cross(s.first, s.second, t.first, t.second, 1e-14))
            throw Error(ErrorKind::InterfaceCrossing, "interfaces intersect");
  // Layer order must be the same at every abscissa.
  for (size_t a = 0; a < open_polylines.size(); ++a)
    for (size_t b = a + 1; b < open_polylines.size(); ++b) {
      int sign = 0;
      for (int s = 0; s <= 256; ++s) {
        const double x = kTwoPi * (s + 0.5) / 257.0;
        const double d = polyline_height(open_polylines[a], x) - polyline_height(open_polylines[b], x);
        const int sg = d > 0 ? 1 : (d < 0 ? -1 : 0);
        if (sg == 0 || (sign != 0 && sg != sign))
          throw Error(ErrorKind::InterfaceCrossing, "open polylines touch or cross");
        sign = sg;
      }
    }
  for (int r = 0; r < num_regions(); ++r)
    if (!region_eps.count(r))
      throw Error(ErrorKind::InvalidArgument, "missing permittivity for region " + std::to_string(r));
}

Mesh::Mesh(std::vector<Vec2> vertices, std::vector<Element> elements,
           std::map<int, cplx> region_eps, BoundaryMode mode, double H, double period)
    : vertices_(std::move(vertices)),
      elements_(std::move(elements)),
      region_eps_(std::move(region_eps)),
      mode_(mode),
      H_(H),
      period_(period) {
  for (auto& el : elements_) {
    for (int v : el.v)
      if (v < 0 || v >= static_cast<int>(vertices_.size()))
        throw Error(ErrorKind::InvalidArgument, "element references a missing vertex");
    if (orient(vertices_[el.v[0]], vertices_[el.v[1]], vertices_[el.v[2]]) < 0)
      std::swap(el.v[1], el.v[2]);
  }
  build_faces();
  classify();
}

void Mesh::build_faces() {
  std::map<std::pair<int, int>, int> index;
  faces_.clear();
  for (int e = 0; e < num_elements(); ++e) {
    const auto& v = elements_[e].v;
    for (int i = 0; i < 3; ++i) {
      const int a = v[i], b = v[(i + 1) % 3];
      const auto key = std::minmax(a, b);
      auto it = index.find(key);
      if (it == index.end()) {
        Face f;
        f.v0 = a;
        f.v1 = b;
        f.owner = e;
        index.emplace(key, static_cast<int>(faces_.size()));
        faces_.push_back(f);
      } else {
        Face& f = faces_[it->second];
        if (f.neighbor != -1)
          throw Error(ErrorKind::InvalidArgument, "edge shared by more than two elements");
        f.neighbor = e;
      }
    }
  }
}

void Mesh::classify() {
  const double tol = 1e-9 * std::max({1.0, H_, period_});
  std::vector<int> left, right;
  for (int i = 0; i < num_faces(); ++i) {
    Face& f = faces_[i];
    f.partner = -1;
    if (f.neighbor != -1) {
      f.tag = FaceTag::Interior;
      continue;
    }
    if (mode_ == BoundaryMode::AllRobin) {
      f.tag = FaceTag::Robin;
      continue;
    }
    const Vec2& a = vertices_[f.v0];
    const Vec2& b = vertices_[f.v1];
    auto on = [&](double pa, double pb, double target) {
      return std::abs(pa - target) < tol && std::abs(pb - target) < tol;
    };
    if (on(a.y(), b.y(), -H_)) {
      f.tag = FaceTag::DirichletBottom;
    } else if (on(a.y(), b.y(), H_)) {
      f.tag = FaceTag::TopDtN;
    } else if (on(a.x(), b.x(), 0.0)) {
      f.tag = FaceTag::PeriodicPair;
      left.push_back(i);
    } else if (on(a.x(), b.x(), period_)) {
      f.tag = FaceTag::PeriodicPair;
      right.push_back(i);
    } else {
      throw Error(ErrorKind::InvalidArgument, "boundary face off the strip boundary");
    }
  }
  auto ymin = [&](int f) {
    return std::min(vertices_[faces_[f].v0].y(), vertices_[faces_[f].v1].y());
  };
  auto ymax = [&](int f) {
    return std::max(vertices_[faces_[f].v0].y(), vertices_[faces_[f].v1].y());
  };
  auto by_y = [&](int a, int b) { return ymin(a) < ymin(b); };
  std::sort(left.begin(), left.end(), by_y);
  std::sort(right.begin(), right.end(), by_y);
  if (left.size() != right.size())
    throw Error(ErrorKind::PeriodicMismatch, "left and right boundaries have different face counts");
  for (size_t i = 0; i < left.size(); ++i) {
    if (std::abs(ymin(left[i]) - ymin(right[i])) > tol ||
        std::abs(ymax(left[i]) - ymax(right[i])) > tol)
      throw Error(ErrorKind::PeriodicMismatch, "left and right boundary vertices differ");
    faces_[left[i]].partner = right[i];
    faces_[right[i]].partner = left[i];
  }
}

cplx Mesh::eps(int e) const {
  auto it = region_eps_.find(elements_[e].region);
  if (it == region_eps_.end())
    throw Error(ErrorKind::InvalidArgument,
                "no permittivity for region " + std::to_string(elements_[e].region));
  return it->second;
}

Vec2 Mesh::normal(int f, int e) const {
  const Face& fc = faces_[f];
  const Vec2 a = vertices_[fc.v0], b = vertices_[fc.v1];
  const Vec2 t = b - a;
  Vec2 n(t.y(), -t.x());
  n.normalize();
  if ((0.5 * (a + b) - barycenter(e)).dot(n) < 0) n = -n;
  return n;
}

double Mesh::face_length(int f) const {
  return (vertices_[faces_[f].v1] - vertices_[faces_[f].v0]).norm();
}

double Mesh::area(int e) const {
  const auto& v = elements_[e].v;
  return 0.5 * orient(vertices_[v[0]], vertices_[v[1]], vertices_[v[2]]);
}

Vec2 Mesh::barycenter(int e) const {
  const auto& v = elements_[e].v;
  return (vertices_[v[0]] + vertices_[v[1]] + vertices_[v[2]]) / 3.0;
}

double Mesh::diameter(int e) const {
  const auto& v = elements_[e].v;
  double l[3];
  for (int i = 0; i < 3; ++i) l[i] = (vertices_[v[(i + 1) % 3]] - vertices_[v[i]]).norm();
  std::sort(l, l + 3);
  if (l[0] * l[0] + l[1] * l[1] <= l[2] * l[2]) return l[2];
  return l[0] * l[1] * l[2] / (2.0 * area(e));  // circumdiameter = abc / (2 area)
}

double Mesh::h() const {
  double h = 0.0;
  for (int e = 0; e < num_elements(); ++e) h = std::max(h, diameter(e));
  return h;
}

std::vector<int> Mesh::faces_with_tag(FaceTag tag) const {
  std::vector<int> out;
  for (int i = 0; i < num_faces(); ++i)
    if (faces_[i].tag == tag) out.push_back(i);
  return out;
}

std::vector<std::pair<int, int>> Mesh::periodic_pairs() const {
  std::vector<std::pair<int, int>> out;
  const double tol = 1e-9 * std::max(1.0, period_);
  for (int i = 0; i < num_faces(); ++i) {
    const Face& f = faces_[i];
    if (f.tag == FaceTag::PeriodicPair && std::abs(vertices_[f.v0].x()) < tol)
      out.emplace_back(i, f.partner);
  }
  return out;
}

Mesh Mesh::to_impedance() const {
  return Mesh(vertices_, elements_, region_eps_, BoundaryMode::AllRobin, H_, period_);
}

Mesh rectangle_mesh(double x0, double x1, double y0, double y1, int nx, int ny, cplx eps) {
  std::vector<Vec2> verts;
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i)
      verts.emplace_back(x0 + (x1 - x0) * i / nx, y0 + (y1 - y0) * j / ny);
  auto id = [&](int i, int j) { return j * (nx + 1) + i; };
  std::vector<Element> els;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      // Diagonals point toward the rectangle centre.
      const bool slash = ((i < nx / 2.0) == (j < ny / 2.0));
      const int a = id(i, j), b = id(i + 1, j), c = id(i + 1, j + 1), d = id(i, j + 1);
      if (slash) {
        els.push_back({{a, b, c}, 0});
        els.push_back({{a, c, d}, 0});
      } else {
        els.push_back({{a, b, d}, 0});
        els.push_back({{b, c, d}, 0});
      }
    }
  return Mesh(std::move(verts), std::move(els), {{0, eps}}, BoundaryMode::AllRobin);
}

Mesh fixed_eight_triangle_mesh() { return rectangle_mesh(0.0, 1.0, -0.5, 0.5, 2, 2); }

std::vector<std::string> validate_mesh(const Mesh& mesh, const InterfaceSpec* spec) {
  std::vector<std::string> bad;
  auto report = [&](const std::string& s) { bad.push_back(s); };
  for (int e = 0; e < mesh.num_elements(); ++e) {
    if (!(mesh.area(e) > 0.0)) report("element " + std::to_string(e) + " has non-positive area");
    if (!mesh.region_eps().count(mesh.element(e).region))
      report("element " + std::to_string(e) + " region has no permittivity");
  }
  for (int f = 0; f < mesh.num_faces(); ++f) {
    const Face& fc = mesh.face(f);
    const bool boundary = fc.neighbor == -1;
    if (boundary == (fc.tag == FaceTag::Interior))
      report("face " + std::to_string(f) + " tag inconsistent with adjacency");
    if (fc.tag == FaceTag::PeriodicPair) {
      if (fc.partner < 0 || mesh.face(fc.partner).partner != f) {
        report("face " + std::to_string(f) + " has no periodic partner");
      } else {
        const Face& g = mesh.face(fc.partner);
        auto ys = [&](const Face& x) {
          return std::minmax(mesh.vertex(x.v0).y(), mesh.vertex(x.v1).y());
        };
        const auto a = ys(fc), b = ys(g);
        if (std::abs(a.first - b.first) > 1e-12 || std::abs(a.second - b.second) > 1e-12)
          report("periodic pair " + std::to_string(f) + " endpoints differ");
      }
    }
    if (mesh.mode() == BoundaryMode::Strip && fc.tag == FaceTag::Robin)
      report("Robin face in a strip mesh");
    if (mesh.mode() == BoundaryMode::AllRobin && boundary && fc.tag != FaceTag::Robin)
      report("non-Robin boundary face in an impedance mesh");
  }
  // Conformity: no vertex lies in the interior of a face.
  for (int f = 0; f < mesh.num_faces(); ++f) {
    const Vec2 a = mesh.vertex(mesh.face(f).v0), b = mesh.vertex(mesh.face(f).v1);
    const double L = (b - a).norm();
    for (int v = 0; v < static_cast<int>(mesh.vertices().size()); ++v) {
      if (v == mesh.face(f).v0 || v == mesh.face(f).v1) continue;
      const Vec2& x = mesh.vertex(v);
      const double t = (x - a).dot(b - a) / (L * L);
      if (t > 1e-9 && t < 1 - 1e-9 && std::abs(orient(a, b, x)) / L < 1e-10 * L)
        report("hanging vertex " + std::to_string(v) + " on face " + std::to_string(f));
    }
  }
  if (spec) {
    std::vector<std::pair<Vec2, Vec2>> segs;
    for (const auto& pl : spec->open_polylines)
      for (size_t i = 0; i + 1 < pl.size(); ++i) segs.emplace_back(pl[i], pl[i + 1]);
    for (const auto& poly : spec->closed_polygons)
      for (size_t i = 0; i < poly.size(); ++i) segs.emplace_back(poly[i], poly[(i + 1) % poly.size()]);
    for (int e = 0; e < mesh.num_elements(); ++e) {
      const auto& v = mesh.element(e).v;
      const Vec2 p[3] = {mesh.vertex(v[0]), mesh.vertex(v[1]), mesh.vertex(v[2])};
      const double scale = 1e-10 * mesh.diameter(e) * mesh.diameter(e);
      bool straddles = false;
      for (const auto& s : segs) {
        for (int i = 0; i < 3 && !straddles; ++i)
          straddles = segments_cross(s.first, s.second, p[i], p[(i + 1) % 3], scale);
        const Vec2 probes[3] = {s.first, s.second, 0.5 * (s.first + s.second)};
        for (const Vec2& q : probes) {
          if (straddles) break;
          straddles = orient(p[0], p[1], q) > scale && orient(p[1], p[2], q) > scale &&
                      orient(p[2], p[0], q) > scale;
        }
        if (straddles) break;
      }
      if (straddles) report("element " + std::to_string(e) + " straddles an interface");
      else if (spec->region_of(mesh.barycenter(e)) != mesh.element(e).region)
        report("element " + std::to_string(e) + " has the wrong region id");
    }
  }
  return bad;
}

}  // namespace pwdg

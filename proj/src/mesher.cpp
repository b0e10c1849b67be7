#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "pwdg/geometry.hpp"

namespace pwdg {

namespace {

double orient(const Vec2& a, const Vec2& b, const Vec2& c) {
  return (b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x());
}

double incircle(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& p) {
  const double ax = a.x() - p.x(), ay = a.y() - p.y();
  const double bx = b.x() - p.x(), by = b.y() - p.y();
  const double cx = c.x() - p.x(), cy = c.y() - p.y();
  const double a2 = ax * ax + ay * ay, b2 = bx * bx + by * by, c2 = cx * cx + cy * cy;
  return ax * (by * c2 - b2 * cy) - ay * (bx * c2 - b2 * cx) + a2 * (bx * cy - by * cx);
}

double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
  const Vec2 t = b - a;
  const double s = std::clamp((p - a).dot(t) / t.squaredNorm(), 0.0, 1.0);
  return (p - (a + s * t)).norm();
}

// Incremental Delaunay triangulation inside a rectangle (Bowyer–Watson).
class Delaunay {
 public:
  Delaunay(const Vec2& lo, const Vec2& hi) {
    pts_ = {lo, {hi.x(), lo.y()}, hi, {lo.x(), hi.y()}};
    add_triangle(0, 1, 2);
    add_triangle(0, 2, 3);
  }

  const std::vector<Vec2>& points() const { return pts_; }

  // Returns the index of the (possibly pre-existing) vertex at p.
  int insert(const Vec2& p, double tol) {
    for (int i = 0; i < static_cast<int>(pts_.size()); ++i)
      if ((pts_[i] - p).norm() < tol) return i;
    const int t0 = locate(p);
    if (t0 < 0) throw Error(ErrorKind::MeshGeneration, "point outside triangulation");
    const int ip = static_cast<int>(pts_.size());
    pts_.push_back(p);

    std::vector<char> in(tris_.size(), 0);
    std::vector<int> cavity{t0};
    in[t0] = 1;
    for (size_t k = 0; k < cavity.size(); ++k) {
      const auto& t = tris_[cavity[k]];
      for (int i = 0; i < 3; ++i) {
        const int u = neighbor(t[i], t[(i + 1) % 3]);
        if (u < 0 || in[u]) continue;
        const auto& s = tris_[u];
        const double L = std::max({(pts_[s[0]] - p).norm(), (pts_[s[1]] - p).norm(),
                                   (pts_[s[2]] - p).norm()});
        if (incircle(pts_[s[0]], pts_[s[1]], pts_[s[2]], p) > 1e-12 * L * L * L * L) {
          in[u] = 1;
          cavity.push_back(u);
        }
      }
    }
    // Grow the cavity over interior boundary edges collinear with p.
    std::vector<std::pair<int, int>> boundary;
    for (bool changed = true; changed;) {
      changed = false;
      boundary.clear();
      for (int c : cavity) {
        const auto& t = tris_[c];
        for (int i = 0; i < 3; ++i) {
          const int a = t[i], b = t[(i + 1) % 3];
          const int u = neighbor(a, b);
          if (u >= 0 && in[u]) continue;
          const double L = (pts_[b] - pts_[a]).norm();
          if (orient(pts_[a], pts_[b], p) <= 1e-12 * L * L) {
            if (u >= 0) {
              in[u] = 1;
              cavity.push_back(u);
              changed = true;
              break;
            }
            continue;  // p splits a hull edge
          }
          boundary.emplace_back(a, b);
        }
        if (changed) break;
      }
    }
    for (int c : cavity) remove_triangle(c);
    for (const auto& [a, b] : boundary) add_triangle(a, b, ip);
    return ip;
  }

  bool has_edge(int a, int b) const { return edges_.count(key(a, b)) || edges_.count(key(b, a)); }

  std::vector<std::array<int, 3>> triangles() const {
    std::vector<std::array<int, 3>> out;
    for (size_t t = 0; t < tris_.size(); ++t)
      if (alive_[t]) out.push_back(tris_[t]);
    return out;
  }

 private:
  static long long key(int a, int b) { return (static_cast<long long>(a) << 32) | static_cast<unsigned>(b); }

  int neighbor(int a, int b) const {
    auto it = edges_.find(key(b, a));
    return it == edges_.end() ? -1 : it->second;
  }

  int locate(const Vec2& p) const {
    int best = -1;
    double best_score = -1e300;
    for (size_t t = 0; t < tris_.size(); ++t) {
      if (!alive_[t]) continue;
      const auto& s = tris_[t];
      double worst = 1e300;
      for (int i = 0; i < 3; ++i) {
        const Vec2& a = pts_[s[i]];
        const Vec2& b = pts_[s[(i + 1) % 3]];
        worst = std::min(worst, orient(a, b, p) / (b - a).norm());
      }
      if (worst > best_score) {
        best_score = worst;
        best = static_cast<int>(t);
      }
    }
    return best_score > -1e-9 ? best : -1;
  }

  void add_triangle(int a, int b, int c) {
    const int t = static_cast<int>(tris_.size());
    tris_.push_back({a, b, c});
    alive_.push_back(1);
    edges_[key(a, b)] = t;
    edges_[key(b, c)] = t;
    edges_[key(c, a)] = t;
  }

  void remove_triangle(int t) {
    alive_[t] = 0;
    const auto& s = tris_[t];
    for (int i = 0; i < 3; ++i) {
      auto it = edges_.find(key(s[i], s[(i + 1) % 3]));
      if (it != edges_.end() && it->second == t) edges_.erase(it);
    }
  }

  std::vector<Vec2> pts_;
  std::vector<std::array<int, 3>> tris_;
  std::vector<char> alive_;
  std::unordered_map<long long, int> edges_;
};

double tri_diameter(const Vec2& a, const Vec2& b, const Vec2& c) {
  double l[3] = {(b - a).norm(), (c - b).norm(), (a - c).norm()};
  std::sort(l, l + 3);
  if (l[0] * l[0] + l[1] * l[1] <= l[2] * l[2]) return l[2];
  return l[0] * l[1] * l[2] / std::abs(orient(a, b, c));
}

}  // namespace

Mesh generate_periodic_mesh(const InterfaceSpec& spec, double h_target) {
  if (!(h_target > 0.0)) throw Error(ErrorKind::InvalidArgument, "h_target must be positive");
  spec.validate();
  const double H = spec.H;
  const int nx = std::max(1, static_cast<int>(std::ceil(kTwoPi / (0.6 * h_target) - 1e-9)));
  const int ny = std::max(1, static_cast<int>(std::ceil(2.0 * H / h_target - 1e-9)));
  if (static_cast<double>(nx) * ny > 4e5) throw Error(ErrorKind::InvalidArgument, "h_target too small");
  const double dx = kTwoPi / nx, dy = 2.0 * H / ny;
  const double seg_max = std::min(dx, dy);
  const double tol = 1e-9 * std::max(H, 1.0);

  // Interface sample points and constraint subsegments.
  std::vector<std::pair<Vec2, Vec2>> segments;
  auto add_chain = [&](const std::vector<Vec2>& pts, bool closed) {
    const size_t n = pts.size();
    for (size_t i = 0; i + (closed ? 0 : 1) < n; ++i) {
      const Vec2 a = pts[i], b = pts[(i + 1) % n];
      const int m = std::max(1, static_cast<int>(std::ceil((b - a).norm() / seg_max - 1e-9)));
      for (int s = 0; s < m; ++s)
        segments.emplace_back(a + (b - a) * (double(s) / m), a + (b - a) * (double(s + 1) / m));
    }
  };
  for (const auto& pl : spec.open_polylines) add_chain(pl, false);
  for (const auto& poly : spec.closed_polygons) add_chain(poly, true);

  // Left/right boundary heights, shared by both sides.
  std::vector<double> side_y;
  std::vector<double> fixed_y;
  for (const auto& pl : spec.open_polylines)
    for (const auto& p : pl)
      if (std::abs(p.x()) < tol || std::abs(p.x() - kTwoPi) < tol) fixed_y.push_back(p.y());
  for (int r = 0; r <= ny; ++r) {
    const double y = -H + r * dy;
    bool near = false;
    if (r > 0 && r < ny)
      for (double f : fixed_y) near = near || std::abs(f - y) < 0.3 * dy;
    if (!near) side_y.push_back(y);
  }
  for (double f : fixed_y) side_y.push_back(f);
  std::sort(side_y.begin(), side_y.end());

  std::vector<Vec2> points;
  for (double y : side_y) {
    points.emplace_back(0.0, y);
    points.emplace_back(kTwoPi, y);
  }
  for (int i = 1; i < nx; ++i) {
    points.emplace_back(i * dx, -H);
    points.emplace_back(i * dx, H);
  }
  for (const auto& s : segments) {
    points.push_back(s.first);
    points.push_back(s.second);
  }
  const double clearance = 0.45 * seg_max;
  for (int r = 1; r < ny; ++r)
    for (int i = 1; i < nx; ++i) {
      const Vec2 p(i * dx, -H + r * dy);
      bool keep = true;
      for (const auto& s : segments)
        if (point_segment_distance(p, s.first, s.second) < clearance) { keep = false; break; }
      if (keep) points.push_back(p);
    }
  std::stable_sort(points.begin(), points.end(), [](const Vec2& a, const Vec2& b) {
    return a.y() < b.y() || (a.y() == b.y() && a.x() < b.x());
  });

  Delaunay dt(Vec2(0.0, -H), Vec2(kTwoPi, H));
  for (const auto& p : points) dt.insert(p, tol);

  std::vector<std::pair<int, int>> constraints;
  for (const auto& s : segments) constraints.emplace_back(dt.insert(s.first, tol), dt.insert(s.second, tol));

  for (int round = 0;; ++round) {
    if (round > 200) throw Error(ErrorKind::MeshGeneration, "refinement did not converge");
    bool changed = false;
    // Conforming recovery of interface subsegments.
    for (size_t c = 0; c < constraints.size(); ++c) {
      const auto [a, b] = constraints[c];
      if (dt.has_edge(a, b)) continue;
      const Vec2 mid = 0.5 * (dt.points()[a] + dt.points()[b]);
      const int m = dt.insert(mid, tol);
      constraints[c] = {a, m};
      constraints.emplace_back(m, b);
      changed = true;
    }
    if (changed) continue;
    // Size control.
    std::vector<Vec2> centroids;
    for (const auto& t : dt.triangles()) {
      const Vec2& a = dt.points()[t[0]];
      const Vec2& b = dt.points()[t[1]];
      const Vec2& c = dt.points()[t[2]];
      if (tri_diameter(a, b, c) > 1.25 * h_target) centroids.push_back((a + b + c) / 3.0);
    }
    if (centroids.empty()) break;
    for (const auto& p : centroids) dt.insert(p, tol);
  }

  std::vector<Element> elements;
  for (const auto& t : dt.triangles()) {
    const Vec2 bc = (dt.points()[t[0]] + dt.points()[t[1]] + dt.points()[t[2]]) / 3.0;
    elements.push_back({t, spec.region_of(bc)});
  }
  Mesh mesh(dt.points(), std::move(elements), spec.region_eps, BoundaryMode::Strip, H, kTwoPi);
  const auto problems = validate_mesh(mesh, &spec);
  if (!problems.empty()) throw Error(ErrorKind::MeshGeneration, problems.front());
  return mesh;
}

}  // namespace pwdg

#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include "pwdg/geometry.hpp"

namespace pwdg {

void write_mesh(std::ostream& os, const Mesh& mesh) {
  os << std::setprecision(17);
  os << "DOMAIN " << (mesh.mode() == BoundaryMode::Strip ? "strip" : "impedance") << ' '
     << mesh.H() << ' ' << mesh.period() << '\n';
  os << "VERTICES " << mesh.vertices().size() << '\n';
  for (size_t i = 0; i < mesh.vertices().size(); ++i)
    os << i << ' ' << mesh.vertex(i).x() << ' ' << mesh.vertex(i).y() << '\n';
  os << "ELEMENTS " << mesh.num_elements() << '\n';
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const auto& el = mesh.element(e);
    os << e << ' ' << el.v[0] << ' ' << el.v[1] << ' ' << el.v[2] << ' ' << el.region << '\n';
  }
  os << "FACES " << mesh.num_faces() << '\n';
  for (int f = 0; f < mesh.num_faces(); ++f) {
    const auto& fc = mesh.face(f);
    os << f << ' ' << fc.v0 << ' ' << fc.v1 << ' ' << to_string(fc.tag) << ' ' << fc.owner << ' '
       << fc.neighbor << '\n';
  }
}

namespace {

void expect(std::istream& is, const std::string& word) {
  std::string w;
  if (!(is >> w) || w != word) throw Error(ErrorKind::IoError, "expected section " + word);
}

}  // namespace

Mesh read_mesh(std::istream& is, const std::map<int, cplx>& region_eps) {
  std::string w;
  BoundaryMode mode = BoundaryMode::AllRobin;
  double H = 0.0, period = kTwoPi;
  if (!(is >> w)) throw Error(ErrorKind::IoError, "empty mesh file");
  if (w == "DOMAIN") {
    std::string m;
    if (!(is >> m >> H >> period)) throw Error(ErrorKind::IoError, "bad DOMAIN line");
    if (m == "strip") mode = BoundaryMode::Strip;
    else if (m != "impedance") throw Error(ErrorKind::IoError, "unknown domain mode " + m);
    if (!(is >> w)) throw Error(ErrorKind::IoError, "missing VERTICES");
  }
  if (w != "VERTICES") throw Error(ErrorKind::IoError, "expected section VERTICES");
  size_t nv = 0;
  if (!(is >> nv)) throw Error(ErrorKind::IoError, "bad vertex count");
  std::vector<Vec2> verts(nv);
  for (size_t i = 0; i < nv; ++i) {
    size_t idx;
    double x, y;
    if (!(is >> idx >> x >> y) || idx != i) throw Error(ErrorKind::IoError, "bad vertex line");
    verts[i] = Vec2(x, y);
  }
  expect(is, "ELEMENTS");
  size_t ne = 0;
  if (!(is >> ne)) throw Error(ErrorKind::IoError, "bad element count");
  std::vector<Element> els(ne);
  for (size_t i = 0; i < ne; ++i) {
    size_t idx;
    if (!(is >> idx >> els[i].v[0] >> els[i].v[1] >> els[i].v[2] >> els[i].region) || idx != i)
      throw Error(ErrorKind::IoError, "bad element line");
  }
  Mesh mesh(std::move(verts), std::move(els), region_eps, mode, H, period);
  // The face section is redundant; when present it must agree with the rebuilt faces.
  if (is >> w) {
    if (w != "FACES") throw Error(ErrorKind::IoError, "expected section FACES");
    size_t nf = 0;
    is >> nf;
    if (nf != static_cast<size_t>(mesh.num_faces()))
      throw Error(ErrorKind::IoError, "face count does not match connectivity");
    for (size_t i = 0; i < nf; ++i) {
      size_t idx;
      int v0, v1, owner, nb;
      std::string tag;
      if (!(is >> idx >> v0 >> v1 >> tag >> owner >> nb))
        throw Error(ErrorKind::IoError, "bad face line");
      const auto& f = mesh.face(static_cast<int>(idx));
      if (f.v0 != v0 || f.v1 != v1 || f.tag != face_tag_from_string(tag) || f.owner != owner ||
          f.neighbor != nb)
        throw Error(ErrorKind::IoError, "face " + std::to_string(idx) + " disagrees with connectivity");
    }
  }
  return mesh;
}

}  // namespace pwdg

#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>

namespace pwdg {

using cplx = std::complex<double>;
using Vec2 = Eigen::Vector2d;
using CVec2 = Eigen::Vector2cd;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr cplx kI{0.0, 1.0};

enum class ErrorKind {
  InvalidArgument,
  InterfaceCrossing,
  PeriodicMismatch,
  MeshGeneration,
  WoodAnomaly,
  FaceNotOnTop,
  SingularMatrix,
  PointOutsideDomain,
  OutOfEnvelope,
  SingularOrigin,
  DegenerateBranch,
  ConfigError,
  IoError,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

// Value and gradient of a complex field at a point.
struct FieldValue {
  cplx value{0.0, 0.0};
  CVec2 grad = CVec2::Zero();
};

using FieldFn = std::function<FieldValue(const Vec2&)>;

// Boundary datum g(x, n, kappa); kappa is the wavenumber of the element owning the face.
using BoundaryData = std::function<cplx(const Vec2& x, const Vec2& n, cplx kappa)>;

inline cplx dot(const Vec2& a, const CVec2& c) { return a.x() * c.x() + a.y() * c.y(); }

}  // namespace pwdg

#pragma once

#include "pwdg/types.hpp"

namespace pwdg {

// Two-layer exact solution on [0,2π] × [-H,H] with unit permittivity above x2 = 0,
// ε2 below, incident exp(ik(x1 cos θ + x2 sin θ)) and zero trace on x2 = -H.
struct TwoLayerCoefficients {
  cplx R, T1, T2;
  cplx s;  // sqrt(ε2 - cos²θ), Im >= 0
  double k = 1.0, theta = 0.0, H = 1.0;
  cplx eps2 = 1.0;
};

TwoLayerCoefficients two_layer_coefficients(double k, double theta, cplx eps2, double H);
FieldValue two_layer_field(const Vec2& x, const TwoLayerCoefficients& c);
// Residuals of the three interface/boundary conditions (max abs).
double two_layer_residual(const TwoLayerCoefficients& c);

// J_ν(x) and J_ν'(x) for ν in [0, 5], x in [0, 100].
double bessel_j(double nu, double x);
double bessel_j_derivative(double nu, double x);

// J_ξ(kr) cos(ξ θ), θ = atan2(x2, x1).
FieldValue circular_wave(const Vec2& x, double xi, double k);

// Boundary datum ∇u·n - iκu of an exact field; κ is supplied per face by the assembler.
BoundaryData impedance_data_from_exact(FieldFn exact);

}  // namespace pwdg

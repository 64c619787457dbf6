#pragma once

#include <string_view>

#include "lsl/boundary_measure.hpp"
#include "lsl/poisson.hpp"

namespace lsl {

enum class CurvatureMethod { hessian, supdef };

std::string_view to_string(CurvatureMethod m);

struct CurvatureReport {
  double kappa_signed = 0.0;
  double sigma = 0.0;  // |grad u(0)|
  CurvatureMethod method = CurvatureMethod::hessian;
  Angle grad_angle;
  double residual = 0.0;  // supdef extrapolation residual, 0 for hessian
};

/// Curvature of the level set {u = u(p)} at p, oriented so that positive
/// values bend toward the gradient:
///   kappa = -(uy^2 uxx - 2 ux uy uxy + ux^2 uyy) / |grad u|^3.
/// With grad u = (sigma, 0) this is -uyy / sigma. Throws on a zero gradient.
double signed_curvature(const Jet2& jet);

struct SupdefOptions {
  double y0 = 1e-2;
  int halvings = 8;
  double residual_tol = 1e-6;  // relative to sigma
};

/// kappa = 2 sup{a : lim u(a y^2, y) / y^2 <= 0} in the frame where the
/// origin gradient points along +x. The limit is taken by Richardson
/// extrapolation over y = y0 2^-k; the root in `a` uses two probes since
/// the limit is affine in a.
double sup_curvature_estimate(const HarmonicField& field, const SupdefOptions& opts = {},
                              double* residual = nullptr);
double sup_curvature_estimate(const BoundaryMeasure& m, const SupdefOptions& opts = {});

CurvatureReport curvature_at_origin(const HarmonicField& field, CurvatureMethod method,
                                    double gradient_floor = 1e-12);
CurvatureReport curvature_at_origin(const BoundaryMeasure& m,
                                    CurvatureMethod method = CurvatureMethod::hessian);

/// Curvature of u + v when both origin gradients point the same way.
inline double weighted_curvature(double sigma1, double kappa1, double sigma2, double kappa2) {
  return (sigma1 * kappa1 + sigma2 * kappa2) / (sigma1 + sigma2);
}

}  // namespace lsl

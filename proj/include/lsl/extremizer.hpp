#pragma once

#include <optional>
#include <span>
#include <vector>

#include "lsl/poisson.hpp"

namespace lsl {

/// w(x, y) = (x^2 + y^2 - 1)(x - 2x^2 + x^3 - 4y^2 + x y^2) / (1 - 2x + x^2 + y^2)^3.
/// Singular only at (1, 0); evaluation within 1e-9 of it throws Error(guard).
double w_eval(Point p);

/// Analytic value, gradient and Hessian of w.
Jet2 w_jet(Point p);

/// scale * w as a HarmonicField. The default scale -1/(2 pi) matches the
/// Poisson-kernel normalization of the transport-map limit.
class ExtremizerField final : public HarmonicField {
 public:
  explicit ExtremizerField(double scale = -1.0 / two_pi) : scale_(scale) {}
  Jet2 jet(Point p) const override { return scale_ * w_jet(p); }
  double increment(Point p) const override { return scale_ * w_eval(p); }
  Jet2 origin_jet() const override { return jet({0.0, 0.0}); }

 private:
  double scale_;
};

struct LimitFit {
  double constant = 0.0;   // c minimizing max |G_a / a^2 - c w|
  double max_error = 0.0;  // the minimized maximum
};

/// Compares the extension G_a of transport_measure(-a, a), divided by a^2,
/// against w at the sample points. Requires 0 < a <= 0.1.
LimitFit limit_ratio_check(double a, std::span<const Point> points);

/// 50 deterministic points filling the disk |p| <= 0.9 (golden-angle spiral).
std::vector<Point> default_limit_points(std::size_t count = 50);

/// Fourth-order finite-difference Laplacian of w at p, with the step scaled
/// to the distance from the singularity and the stencil evaluated in extended
/// precision.
double fd_laplacian_w(Point p);

struct ExtremizerCheckReport {
  std::optional<double> harmonicity_residual;  // max |FD laplacian|
  std::optional<Jet2> origin_jet;
  std::optional<double> kappa_magnitude;
  std::optional<double> limit_constant;
  std::optional<double> limit_max_error;
};

enum class ExtremizerCheck { all, harmonic, curvature, limit };

/// harmonic: 10^3 seeded random points with |p| <= 0.9.
ExtremizerCheckReport run_extremizer_checks(ExtremizerCheck which, double a = 1e-2,
                                            unsigned seed = 7);

}  // namespace lsl

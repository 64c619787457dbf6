#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "lsl/boundary_measure.hpp"
#include "lsl/poisson.hpp"

namespace lsl {

struct TraceOptions {
  double r_stop = 0.999;
  double h_max = 1e-2;
  double curvature_step = 0.1;     // h <= curvature_step / (1 + |kappa_local|)
  double boundary_fraction = 0.25;  // h <= boundary_fraction * (1 - |p|)
  double newton_tol = 1e-12;       // |u| / |grad u|
  double accept_tol = 1e-9;
  int newton_max_iter = 20;
  double max_arc = 20.0;
};

/// Zero level set through the origin, ordered by arc length.
struct LevelCurve {
  std::vector<Point> points;
  std::vector<double> arc;  // cumulative arc length, arc[0] = 0
  std::size_t origin_index = 0;
  bool closed = false;
  bool saddle = false;  // gradient collapsed along the curve
  bool capped = false;  // arc-length cap reached before r_stop
  std::optional<std::pair<Angle, Angle>> exit_angles;  // (first end, last end)
};

/// Predictor-corrector continuation of {u = u(0)} from the origin in both
/// tangent directions, with Newton correction along the gradient. Ends at
/// radius r_stop. Throws Error(degenerate_gradient) if the origin is
/// critical and Error(trace_failure) if the corrector cannot converge.
LevelCurve trace_zero_set(const HarmonicField& field, const TraceOptions& opts = {});
LevelCurve trace_zero_set(const BoundaryMeasure& m, const TraceOptions& opts = {});

/// True iff some pair of non-adjacent segments intersects.
bool polyline_self_intersects(std::span<const Point> pts);

/// Not closed and free of self-intersections.
bool is_simple_arc(const LevelCurve& c);

/// Curvature at the origin from the circle tangent to the level line at the
/// origin that best fits the four nearest traced neighbours. `gradient` is
/// the origin gradient; the sign follows signed_curvature.
double circle_fit_curvature(const LevelCurve& c, Point gradient);

/// Positivity-arc test for a zero-mean density with exactly two sign
/// changes at a < 0 < b, positive at angle 0: whether the moment vector
/// lies in the cone over the arc [a, b]. Throws Error(invalid_input) when
/// the structure does not hold.
bool cone_containment(const DensityGrid& density);

/// Sign-change angles (a, b) of a density with the structure above.
std::pair<double, double> positivity_arc(const DensityGrid& density);

void write_curve_csv(std::ostream& os, const LevelCurve& c);
void write_curve_svg(std::ostream& os, const LevelCurve& c);

}  // namespace lsl

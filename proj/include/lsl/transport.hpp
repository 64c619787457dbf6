#pragma once

#include <optional>

#include "lsl/boundary_measure.hpp"

namespace lsl {

/// Parameters of the transport maps: -pi < a < 0 < b < pi, and for the
/// epsilon maps 0 < eps < min(-a, b). Ranges are open; construction throws
/// Error(invalid_input) otherwise.
class TransportParams {
 public:
  TransportParams(double a, double b, std::optional<double> eps = std::nullopt);

  double a() const { return a_; }
  double b() const { return b_; }
  const std::optional<double>& eps() const { return eps_; }

  /// Masses removed at angle a and angle b by one unit of transport; they
  /// sum to 1 and balance the sin-moment: w_a sin a + w_b sin b = 0.
  double weight_a() const;
  double weight_b() const;

 private:
  double a_, b_;
  std::optional<double> eps_;
};

/// delta_0 - w_a delta_a - w_b delta_b.
BoundaryMeasure transport_measure(const TransportParams& p);

/// 2 (1 + cos a + cos b + cos(a + b)), evaluated through the equivalent
/// product 8 cos(a/2) cos(b/2) cos((a+b)/2) to keep relative accuracy
/// near the corners.
double transport_curvature_closed(const TransportParams& p);

/// delta_eps + delta_-eps - 2 w_a delta_a - 2 w_b delta_b.
BoundaryMeasure eps_transport_measure(const TransportParams& p);

/// delta_eps + delta_-eps - 2 delta_0, for 0 < eps < pi.
BoundaryMeasure nu_measure(double eps);

/// |kappa| of the extension of nu_measure(eps): 2 (1 - cos 2 eps) / (1 - cos eps),
/// strictly below 8 on (0, pi).
double h_curvature_closed(double eps);

/// Largest atom-weight discrepancy between the epsilon map and
/// 2 * transport_measure + nu_measure. Zero by weight algebra.
double decompose_check(const TransportParams& p);

/// Largest |weight difference| over the union of atom angles.
double max_atom_difference(const BoundaryMeasure& m1, const BoundaryMeasure& m2);

}  // namespace lsl

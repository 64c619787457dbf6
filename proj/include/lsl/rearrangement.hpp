#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <vector>

#include "lsl/boundary_measure.hpp"
#include "lsl/poisson.hpp"

namespace lsl {

struct PivotResult {
  Angle t_star;
  double alignment_residual = 0.0;  // |angle(P e_t) - angle(positive moment)|
  double positive_mass = 0.0;
};

/// Concentration angle for a continuous density with one positivity arc
/// (a, b) around angle 0: the t in (a, b) at which a point mass carrying
/// all positive mass has the same origin-gradient direction as the
/// positive part itself. Found by bisection on the cross product; throws
/// Error(pivot_not_found) if there is no sign change on (a, b).
PivotResult claim2_pivot(const BoundaryMeasure& m, double tol = 1e-10);

/// One greedy increment: adds c * mu_{left-pivot, right-pivot} in the pivot
/// frame, with c the largest intensity that keeps both bins nonnegative.
/// The bins are the density nodes nearest to `left` and `right`; both must
/// carry positive density.
BoundaryMeasure sweep_pair_step(const BoundaryMeasure& m, Angle left, Angle right, Angle pivot);

struct TraceStep {
  std::size_t step = 0;
  int round = 0;
  double sigma = 0.0;
  double kappa = 0.0;
  double off_target_mass = 0.0;
  double grad_misalignment = 0.0;  // angle between grad u and the pivot direction
  bool aligned = false;
  std::optional<double> law_residual;  // |kappa - weighted-average prediction|
  std::optional<std::size_t> snapshot;
};

struct RearrangementTrace {
  std::vector<TraceStep> steps;  // steps[0] is the input state
  std::vector<BoundaryMeasure> snapshots;
  BoundaryMeasure terminal_measure;
  Angle pivot;
  double initial_off_target = 0.0;
  double max_abs_mass = 0.0;  // worst |total mass| over all states
  bool stalled = false;
  bool bound_violation = false;  // kappa above 8 + 1e-8 at some step
};

struct RearrangementOptions {
  std::size_t snapshot_every = 0;  // 0: only the input and terminal states
  double alignment_tol = 1e-8;
  double pivot_tol = 1e-10;
};

/// Greedy discretization of the positive-mass sweep: repeatedly pairs the
/// outermost positive bins on opposite sides of the pivot until the
/// positive mass off the pivot is at most tol times its initial value.
RearrangementTrace run_rearrangement(const BoundaryMeasure& m, std::size_t max_steps, double tol,
                                     const RearrangementOptions& opts = {});

/// Negative-mass sweep toward +-eps for a measure with a positive atom at 0
/// and nonpositive density vanishing on (-eps0, eps0). Each round moves the
/// negative mass outside +-eps_r to atoms at +-eps_r, then eps halves.
RearrangementTrace run_eps_rearrangement(const BoundaryMeasure& m, double eps0, int rounds,
                                         std::size_t max_steps = 1'000'000, double tol = 1e-10,
                                         const RearrangementOptions& opts = {});

void write_trace_csv(std::ostream& os, const RearrangementTrace& t);

}  // namespace lsl

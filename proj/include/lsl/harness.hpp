#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "lsl/boundary_measure.hpp"
#include "lsl/parallel.hpp"

namespace lsl {

/// A member of the reduced class: nonpositive density vanishing exactly on
/// [a, b] and a positive atom at angle 0 carrying the balancing mass.
struct FClassSpec {
  double a = 0.0;
  double b = 0.0;
  DensityGrid density;
  double atom_weight = 0.0;
  std::uint64_t seed = 0;

  BoundaryMeasure measure() const;
};

/// Builds the spec for a given density; the atom balances the quadrature mass.
FClassSpec make_f_class(double a, double b, DensityGrid density, std::uint64_t seed = 0);

/// Random spec: a in (-pi + 0.1, -0.05), b in (0.05, pi - 0.1), density
/// -sin(pi tau) (c0 + raised-cosine bumps) on the complement arc, where tau
/// runs from 0 at b to 1 at a + 2 pi. Deterministic in `seed`; n >= 64.
FClassSpec sample_f_class(std::uint64_t seed, std::size_t n);

/// Continuous zero-mean density with one positivity arc around angle 0.
/// With `symmetric`, the density is even.
BoundaryMeasure sample_single_arc_measure(std::uint64_t seed, std::size_t n, bool symmetric);

/// Zero-mean trigonometric polynomial of degree <= 3 with exactly two sign
/// changes on the grid, rotated so that the positivity arc is centred at 0.
DensityGrid sample_trig_density(std::uint64_t seed, std::size_t n);

/// Per-index seed derivation for batch runs.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

struct SampleOutcome {
  double kappa_hessian = 0.0;
  double kappa_supdef = 0.0;
  bool included = false;
  std::string exclusion;  // empty when included
};

SampleOutcome evaluate_f_sample(const FClassSpec& spec);

struct FalsifyReport {
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  std::size_t grid = 0;
  double max_kappa = 0.0;  // max |kappa| over included samples
  std::optional<std::size_t> argmax_index;
  std::optional<FClassSpec> argmax_spec;
  std::size_t excluded = 0;
  std::size_t excluded_degenerate = 0;
  std::size_t excluded_not_simple = 0;
  std::size_t excluded_trace_failure = 0;
  std::size_t excluded_supdef = 0;
  double max_method_gap = 0.0;  // max |hessian - supdef| / (1 + |kappa|)
  std::optional<std::size_t> counterexample_index;

  nlohmann::json to_json() const;
};

inline constexpr double falsify_threshold = 8.0 + 1e-6;

/// Samples `count` members of the reduced class and records the largest
/// |kappa| among those whose level set is a simple arc. Throws
/// Error(counterexample) if an included sample exceeds 8 + 1e-6; the
/// report is still written through `report_out` when given.
FalsifyReport falsify_batch(std::size_t count, std::uint64_t seed, std::size_t n = 128,
                            Exec exec = Exec::parallel, FalsifyReport* report_out = nullptr);

/// Same over explicit specs (index = position in `specs`).
FalsifyReport falsify_specs(std::span<const FClassSpec> specs, Exec exec = Exec::parallel,
                            FalsifyReport* report_out = nullptr);

struct SweepRow {
  double a = 0.0;
  double kappa_closed = 0.0;   // 4 (1 + cos a)
  double kappa_numeric = 0.0;  // curvature of transport_measure(-a, a)
  double difference = 0.0;
};

std::vector<SweepRow> sweep_symmetric(std::span<const double> a_values,
                                      Exec exec = Exec::parallel);

}  // namespace lsl

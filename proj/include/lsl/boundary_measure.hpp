#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "lsl/geometry.hpp"

namespace lsl {

/// Signed point mass on the unit circle.
struct Atom {
  Angle angle;
  double weight = 0.0;
};

/// Density sampled on the uniform periodic grid t_k = -pi + 2 pi k / n.
/// Integrals use the periodic trapezoidal rule.
class DensityGrid {
 public:
  static constexpr std::size_t min_size = 16;

  /// Throws Error(invalid_input) if n < 16 or a value is not finite; the
  /// error value is the offending index.
  explicit DensityGrid(std::vector<double> values);

  std::size_t size() const { return values_.size(); }
  std::span<const double> values() const { return values_; }
  double operator[](std::size_t k) const { return values_[k]; }

  double spacing() const { return two_pi / static_cast<double>(values_.size()); }
  double node(std::size_t k) const { return -pi + spacing() * static_cast<double>(k); }

  /// Index of the grid node nearest to `theta` (mod 2 pi).
  std::size_t nearest_node(double theta) const;

  /// Periodic linear interpolation at an arbitrary angle.
  double interpolate(double theta) const;

  /// Linear resampling onto a grid of `n` nodes.
  DensityGrid resampled(std::size_t n) const;

  /// Trapezoidal integral of the density times f(t).
  template <class F>
  double integrate(F&& f) const {
    const double h = spacing();
    double acc = 0.0;
    for (std::size_t k = 0; k < values_.size(); ++k) acc += values_[k] * f(node(k));
    return acc * h;
  }

  double integral() const;

 private:
  std::vector<double> values_;
};

/// Samples f at the grid nodes of an n-point grid.
template <class F>
DensityGrid sample_density(std::size_t n, F&& f) {
  std::vector<double> v(n);
  const double h = two_pi / static_cast<double>(n);
  for (std::size_t k = 0; k < n; ++k) v[k] = f(-pi + h * static_cast<double>(k));
  return DensityGrid(std::move(v));
}

/// Atoms plus an optional density. Immutable after construction: atoms are
/// sorted by angle, merged per canonical angle, and zero weights dropped.
class BoundaryMeasure {
 public:
  BoundaryMeasure() = default;

  std::span<const Atom> atoms() const { return atoms_; }
  const std::optional<DensityGrid>& density() const { return density_; }

  /// Angle by which the density is still "behind" the atoms after a
  /// rotation by a non-grid multiple (see rotate_measure).
  double density_rotation_residual() const { return density_residual_; }

  bool empty() const { return atoms_.empty() && !density_; }

  /// Weight of the atom at exactly this canonical angle, 0 if absent.
  double atom_weight(Angle a) const;

 private:
  friend BoundaryMeasure make_measure(std::vector<Atom>, std::optional<DensityGrid>);
  friend BoundaryMeasure rotate_measure(const BoundaryMeasure&, Angle);

  std::vector<Atom> atoms_;
  std::optional<DensityGrid> density_;
  double density_residual_ = 0.0;
};

/// Canonicalize: wrap angles, merge duplicates, drop zero atoms. Non-finite
/// weights are rejected with the atom index as the error value.
BoundaryMeasure make_measure(std::vector<Atom> atoms,
                             std::optional<DensityGrid> density = std::nullopt);

inline BoundaryMeasure atom_measure(double angle, double weight) {
  return make_measure({Atom{Angle(angle), weight}});
}

/// c1*m1 + c2*m2. Densities of different sizes are resampled onto the finer
/// grid.
BoundaryMeasure combine(const BoundaryMeasure& m1, const BoundaryMeasure& m2,
                        double c1, double c2);

/// Atoms move by theta exactly; the density shifts by the nearest whole
/// number of grid cells and the remainder is recorded.
BoundaryMeasure rotate_measure(const BoundaryMeasure& m, Angle theta);

BoundaryMeasure negate(const BoundaryMeasure& m);

double total_mass(const BoundaryMeasure& m);

/// (integral of cos t dmu, integral of sin t dmu).
Point moment_vector(const BoundaryMeasure& m);

/// Sum of |atom weights| plus the L1 norm of the density.
double variation(const BoundaryMeasure& m);

}  // namespace lsl

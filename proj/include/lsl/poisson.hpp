#pragma once

#include <span>
#include <vector>

#include "lsl/boundary_measure.hpp"
#include "lsl/geometry.hpp"
#include "lsl/parallel.hpp"

namespace lsl {

/// Value, gradient and Hessian of a function at a point.
struct Jet2 {
  double u = 0.0;
  double ux = 0.0, uy = 0.0;
  double uxx = 0.0, uxy = 0.0, uyy = 0.0;

  Point gradient() const { return {ux, uy}; }
  double laplacian() const { return uxx + uyy; }

  Jet2& operator+=(const Jet2& o) {
    u += o.u; ux += o.ux; uy += o.uy; uxx += o.uxx; uxy += o.uxy; uyy += o.uyy;
    return *this;
  }
  friend Jet2 operator+(Jet2 a, const Jet2& b) { return a += b; }
  friend Jet2 operator*(double s, Jet2 a) {
    a.u *= s; a.ux *= s; a.uy *= s; a.uxx *= s; a.uxy *= s; a.uyy *= s;
    return a;
  }
};

/// Minimum distance from a boundary atom at which evaluation is allowed.
struct EvalGuard {
  double atom_distance = 1e-6;
};

/// Poisson kernel K(p; t) = (1 - |p|^2) / (2 pi |p - e^{it}|^2) and its
/// partial derivatives in (x, y). Throws Error(guard) within the guard
/// distance of e^{it} and Error(invalid_input) for |p| >= 1.
Jet2 kernel_jet(Point p, Angle t, EvalGuard guard = {});

/// K(p; t) - K(0; t), evaluated without cancellation.
double kernel_increment(Point p, Angle t);

/// Jet of the Poisson extension of `m` at p: atoms in closed form, the
/// density by the trapezoidal rule applied to the kernel jets.
Jet2 evaluate_jet(const BoundaryMeasure& m, Point p, EvalGuard guard = {});

/// Exact origin jet from the trigonometric moments of `m`.
Jet2 origin_jet_closed(const BoundaryMeasure& m);

/// Batch evaluation; Exec::parallel distributes points over OpenMP threads.
std::vector<Jet2> evaluate_jets(const BoundaryMeasure& m, std::span<const Point> points,
                                Exec exec = Exec::parallel, EvalGuard guard = {});

/// A harmonic function in the unit disk that the curvature and tracing
/// code can query.
class HarmonicField {
 public:
  virtual ~HarmonicField() = default;
  virtual Jet2 jet(Point p) const = 0;
  /// u(p) - u(0).
  virtual double increment(Point p) const = 0;
  virtual Jet2 origin_jet() const = 0;
  /// Jet with `u` replaced by the increment u(p) - u(0).
  virtual Jet2 level_jet(Point p) const {
    Jet2 j = jet(p);
    j.u = increment(p);
    return j;
  }
  /// Magnitude used to scale degeneracy thresholds.
  virtual double scale() const { return 1.0; }
};

/// Poisson extension of a measure with the kernel sources flattened once
/// (atoms and weighted grid nodes share one loop).
class MeasureField final : public HarmonicField {
 public:
  explicit MeasureField(const BoundaryMeasure& m, EvalGuard guard = {});

  Jet2 jet(Point p) const override;
  double increment(Point p) const override;
  Jet2 origin_jet() const override { return origin_; }
  Jet2 level_jet(Point p) const override;
  double scale() const override { return scale_; }

  const BoundaryMeasure& measure() const { return measure_; }

 private:
  struct Source {
    double c, s, w;
    bool guarded;
  };
  BoundaryMeasure measure_;
  std::vector<Source> sources_;
  Jet2 origin_;
  EvalGuard guard_;
  double scale_ = 1.0;
};

/// p -> u(r p) for 0 < r <= 1; derivatives pick up factors r and r^2.
class DilatedField final : public HarmonicField {
 public:
  DilatedField(const BoundaryMeasure& m, double r);

  Jet2 jet(Point p) const override;
  double increment(Point p) const override;
  Jet2 origin_jet() const override;
  double scale() const override { return base_.scale(); }
  double radius() const { return r_; }

 private:
  static Jet2 scale(Jet2 j, double r);
  MeasureField base_;
  double r_;
};

DilatedField dilate(const BoundaryMeasure& m, double r);

}  // namespace lsl

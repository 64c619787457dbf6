#include "lsl/poisson.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <string>

#include "lsl/error.hpp"

namespace lsl {

namespace {

void check_inside(Point p) {
  if (!(p.norm2() < 1.0))
    throw Error(ErrorKind::invalid_input,
                "evaluation point outside the open unit disk (|p| = " + std::to_string(p.norm()) + ")",
                p.norm());
}

// Kernel jet for the boundary point (c, s), without guards.
Jet2 raw_kernel_jet(Point p, double c, double s) {
  const double x = p.x, y = p.y;
  const double n = 1.0 - x * x - y * y;
  const double dx = x - c, dy = y - s;
  const double g = 1.0 / (dx * dx + dy * dy);
  const double g2 = g * g, g3 = g2 * g;

  const double gx = -2.0 * dx * g2;
  const double gy = -2.0 * dy * g2;
  const double gxx = -2.0 * g2 + 8.0 * dx * dx * g3;
  const double gyy = -2.0 * g2 + 8.0 * dy * dy * g3;
  const double gxy = 8.0 * dx * dy * g3;

  const double nx = -2.0 * x, ny = -2.0 * y;
  constexpr double k = 1.0 / two_pi;
  Jet2 j;
  j.u = k * n * g;
  j.ux = k * (nx * g + n * gx);
  j.uy = k * (ny * g + n * gy);
  j.uxx = k * (-2.0 * g + 2.0 * nx * gx + n * gxx);
  j.uyy = k * (-2.0 * g + 2.0 * ny * gy + n * gyy);
  j.uxy = k * (nx * gy + ny * gx + n * gxy);
  return j;
}

double raw_increment(Point p, double c, double s) {
  const double dx = p.x - c, dy = p.y - s;
  return (p.x * c + p.y * s - p.norm2()) / (pi * (dx * dx + dy * dy));
}

void check_guard(Point p, double c, double s, EvalGuard guard) {
  const double d = std::hypot(p.x - c, p.y - s);
  if (d < guard.atom_distance)
    throw Error(ErrorKind::guard,
                "evaluation within " + std::to_string(d) + " of a boundary atom", d);
}

}  // namespace

Jet2 kernel_jet(Point p, Angle t, EvalGuard guard) {
  check_inside(p);
  const double c = t.cos(), s = t.sin();
  check_guard(p, c, s, guard);
  return raw_kernel_jet(p, c, s);
}

double kernel_increment(Point p, Angle t) {
  check_inside(p);
  return raw_increment(p, t.cos(), t.sin());
}

Jet2 evaluate_jet(const BoundaryMeasure& m, Point p, EvalGuard guard) {
  check_inside(p);
  Jet2 acc;
  for (const Atom& a : m.atoms()) acc += a.weight * kernel_jet(p, a.angle, guard);
  if (const auto& d = m.density()) {
    Jet2 dens;
    for (std::size_t k = 0; k < d->size(); ++k) {
      const double t = d->node(k);
      dens += (*d)[k] * raw_kernel_jet(p, std::cos(t), std::sin(t));
    }
    acc += d->spacing() * dens;
  }
  if (!std::isfinite(acc.u) || !std::isfinite(acc.uxx))
    throw Error(ErrorKind::internal, "non-finite Poisson jet");
  return acc;
}

Jet2 origin_jet_closed(const BoundaryMeasure& m) {
  // Atoms use 1 - cos = versin so that nearly cancelling configurations
  // (nu-type measures at small angles) keep full relative accuracy.
  double mass = 0.0, vers1 = 0.0, vers2 = 0.0, s1 = 0.0, s2 = 0.0;
  for (const Atom& a : m.atoms()) {
    const double t = a.angle.value();
    mass += a.weight;
    vers1 += a.weight * versin(t);
    vers2 += a.weight * versin(2.0 * t);
    s1 += a.weight * std::sin(t);
    s2 += a.weight * std::sin(2.0 * t);
  }
  double c1 = mass - vers1;
  double c2 = mass - vers2;
  if (const auto& d = m.density()) {
    mass += d->integral();
    c1 += d->integrate([](double t) { return std::cos(t); });
    c2 += d->integrate([](double t) { return std::cos(2.0 * t); });
    s1 += d->integrate([](double t) { return std::sin(t); });
    s2 += d->integrate([](double t) { return std::sin(2.0 * t); });
  }
  Jet2 j;
  j.u = mass / two_pi;
  j.ux = c1 / pi;
  j.uy = s1 / pi;
  j.uxx = 2.0 * c2 / pi;
  j.uxy = 2.0 * s2 / pi;
  j.uyy = -j.uxx;
  return j;
}

std::vector<Jet2> evaluate_jets(const BoundaryMeasure& m, std::span<const Point> points,
                                Exec exec, EvalGuard guard) {
  std::vector<Jet2> out(points.size());
  const MeasureField field(m, guard);
  const auto n = static_cast<long long>(points.size());
  if (exec == Exec::serial) {
    for (long long i = 0; i < n; ++i) out[i] = field.jet(points[i]);
    return out;
  }
  // Exceptions cannot cross the OpenMP region; capture the first one.
  std::exception_ptr failure;
#pragma omp parallel for schedule(static) num_threads(thread_count())
  for (long long i = 0; i < n; ++i) {
    try {
      out[i] = field.jet(points[i]);
    } catch (...) {
#pragma omp critical
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

MeasureField::MeasureField(const BoundaryMeasure& m, EvalGuard guard)
    : measure_(m), origin_(origin_jet_closed(m)), guard_(guard), scale_(std::max(1.0, variation(m))) {
  for (const Atom& a : m.atoms()) sources_.push_back({a.angle.cos(), a.angle.sin(), a.weight, true});
  if (const auto& d = m.density()) {
    const double h = d->spacing();
    for (std::size_t k = 0; k < d->size(); ++k) {
      if ((*d)[k] == 0.0) continue;
      const double t = d->node(k);
      sources_.push_back({std::cos(t), std::sin(t), h * (*d)[k], false});
    }
  }
}

Jet2 MeasureField::jet(Point p) const {
  check_inside(p);
  Jet2 acc;
  for (const Source& s : sources_) {
    if (s.guarded) check_guard(p, s.c, s.s, guard_);
    acc += s.w * raw_kernel_jet(p, s.c, s.s);
  }
  return acc;
}

Jet2 MeasureField::level_jet(Point p) const {
  check_inside(p);
  Jet2 acc;
  double inc = 0.0;
  for (const Source& s : sources_) {
    if (s.guarded) check_guard(p, s.c, s.s, guard_);
    acc += s.w * raw_kernel_jet(p, s.c, s.s);
    inc += s.w * raw_increment(p, s.c, s.s);
  }
  acc.u = inc;
  return acc;
}

double MeasureField::increment(Point p) const {
  check_inside(p);
  double acc = 0.0;
  for (const Source& s : sources_) {
    if (s.guarded) check_guard(p, s.c, s.s, guard_);
    acc += s.w * raw_increment(p, s.c, s.s);
  }
  return acc;
}

DilatedField::DilatedField(const BoundaryMeasure& m, double r) : base_(m), r_(r) {
  if (!(r > 0.0 && r <= 1.0))
    throw Error(ErrorKind::invalid_input, "dilation radius must lie in (0, 1]", r);
}

Jet2 DilatedField::scale(Jet2 j, double r) {
  j.ux *= r; j.uy *= r;
  j.uxx *= r * r; j.uxy *= r * r; j.uyy *= r * r;
  return j;
}

Jet2 DilatedField::jet(Point p) const { return scale(base_.jet(r_ * p), r_); }
double DilatedField::increment(Point p) const { return base_.increment(r_ * p); }
Jet2 DilatedField::origin_jet() const { return scale(base_.origin_jet(), r_); }

DilatedField dilate(const BoundaryMeasure& m, double r) { return DilatedField(m, r); }

}  // namespace lsl

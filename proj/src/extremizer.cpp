#include "lsl/extremizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>

#include "lsl/curvature.hpp"
#include "lsl/error.hpp"
#include "lsl/transport.hpp"

namespace lsl {

namespace {

void check_singularity(Point p) {
  const double d = std::hypot(p.x - 1.0, p.y);
  if (d < 1e-9)
    throw Error(ErrorKind::guard, "evaluation within " + std::to_string(d) + " of (1, 0)", d);
}

}  // namespace

double w_eval(Point p) {
  check_singularity(p);
  const double x = p.x, y = p.y;
  const double a = x * x + y * y - 1.0;
  const double b = x - 2.0 * x * x + x * x * x - 4.0 * y * y + x * y * y;
  const double d = (x - 1.0) * (x - 1.0) + y * y;
  return a * b / (d * d * d);
}

Jet2 w_jet(Point p) {
  check_singularity(p);
  const double x = p.x, y = p.y;

  // w = A * B * E with E = D^-3.
  const double A = x * x + y * y - 1.0;
  const double Ax = 2.0 * x, Ay = 2.0 * y;  // Axx = Ayy = 2, Axy = 0

  const double B = x - 2.0 * x * x + x * x * x - 4.0 * y * y + x * y * y;
  const double Bx = 1.0 - 4.0 * x + 3.0 * x * x + y * y;
  const double By = -8.0 * y + 2.0 * x * y;
  const double Bxx = -4.0 + 6.0 * x;
  const double Bxy = 2.0 * y;
  const double Byy = -8.0 + 2.0 * x;

  const double D = (x - 1.0) * (x - 1.0) + y * y;
  const double Dx = 2.0 * (x - 1.0), Dy = 2.0 * y;  // Dxx = Dyy = 2
  const double E = 1.0 / (D * D * D);
  const double E4 = E / D, E5 = E4 / D;
  const double Ex = -3.0 * E4 * Dx;
  const double Ey = -3.0 * E4 * Dy;
  const double Exx = 12.0 * E5 * Dx * Dx - 6.0 * E4;
  const double Eyy = 12.0 * E5 * Dy * Dy - 6.0 * E4;
  const double Exy = 12.0 * E5 * Dx * Dy;

  const double F = A * B;
  const double Fx = Ax * B + A * Bx;
  const double Fy = Ay * B + A * By;
  const double Fxx = 2.0 * B + 2.0 * Ax * Bx + A * Bxx;
  const double Fyy = 2.0 * B + 2.0 * Ay * By + A * Byy;
  const double Fxy = Ax * By + Ay * Bx + A * Bxy;

  Jet2 j;
  j.u = F * E;
  j.ux = Fx * E + F * Ex;
  j.uy = Fy * E + F * Ey;
  j.uxx = Fxx * E + 2.0 * Fx * Ex + F * Exx;
  j.uyy = Fyy * E + 2.0 * Fy * Ey + F * Eyy;
  j.uxy = Fxy * E + Fx * Ey + Fy * Ex + F * Exy;
  return j;
}

namespace {

// Stencil arithmetic runs in quad precision: near (1, 0) |w| reaches ~2e3 and
// the double-precision rounding floor of the stencil is far above 1e-6.
#ifdef __SIZEOF_FLOAT128__
using wide = __float128;
#else
using wide = long double;
#endif

wide w_wide(wide x, wide y) {
  const wide d = 1 - 2 * x + x * x + y * y;
  return (x * x + y * y - 1) * (x - 2 * x * x + x * x * x - 4 * y * y + x * y * y) / (d * d * d);
}

}  // namespace

double fd_laplacian_w(Point p) {
  const double dist = std::hypot(p.x - 1.0, p.y);
  if (dist < 1e-9) throw Error(ErrorKind::guard, "too close to the singularity of w", dist);
  const wide h = 1e-4 * dist;
  const wide x = p.x, y = p.y;
  const wide c = w_wide(x, y);
  const wide lxx = -w_wide(x + 2 * h, y) + 16 * w_wide(x + h, y) - 30 * c + 16 * w_wide(x - h, y) -
                   w_wide(x - 2 * h, y);
  const wide lyy = -w_wide(x, y + 2 * h) + 16 * w_wide(x, y + h) - 30 * c + 16 * w_wide(x, y - h) -
                   w_wide(x, y - 2 * h);
  return static_cast<double>((lxx + lyy) / (12 * h * h));
}

std::vector<Point> default_limit_points(std::size_t count) {
  const double golden = pi * (3.0 - std::sqrt(5.0));
  std::vector<Point> pts;
  pts.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    const double r = 0.9 * std::sqrt((static_cast<double>(k) + 0.5) / static_cast<double>(count));
    const double t = golden * static_cast<double>(k);
    pts.push_back({r * std::cos(t), r * std::sin(t)});
  }
  return pts;
}

LimitFit limit_ratio_check(double a, std::span<const Point> points) {
  if (!(a > 0.0 && a <= 0.1))
    throw Error(ErrorKind::invalid_input, "limit_ratio_check needs 0 < a <= 0.1", a);
  const MeasureField g(transport_measure(TransportParams(-a, a)));
  std::vector<double> ratio(points.size()), w(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    ratio[i] = g.jet(points[i]).u / (a * a);
    w[i] = w_eval(points[i]);
  }

  auto worst = [&](double c) {
    double e = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) e = std::max(e, std::abs(ratio[i] - c * w[i]));
    return e;
  };

  // The objective is convex and piecewise linear in c; its minimizer lies
  // within the range of the pointwise ratios.
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] == 0.0) continue;
    lo = std::min(lo, ratio[i] / w[i]);
    hi = std::max(hi, ratio[i] / w[i]);
  }
  if (!(lo <= hi)) return {0.0, worst(0.0)};
  for (int it = 0; it < 300 && hi - lo > 1e-16 * std::max(1.0, std::abs(lo)); ++it) {
    const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
    if (worst(m1) <= worst(m2))
      hi = m2;
    else
      lo = m1;
  }
  const double c = 0.5 * (lo + hi);
  return {c, worst(c)};
}

ExtremizerCheckReport run_extremizer_checks(ExtremizerCheck which, double a, unsigned seed) {
  ExtremizerCheckReport r;
  const bool all = which == ExtremizerCheck::all;
  if (all || which == ExtremizerCheck::harmonic) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const double rad = 0.9 * std::sqrt(u01(rng));
      const double t = two_pi * u01(rng);
      const Point p{rad * std::cos(t), rad * std::sin(t)};
      worst = std::max(worst, std::abs(fd_laplacian_w(p)));
    }
    r.harmonicity_residual = worst;
  }
  if (all || which == ExtremizerCheck::curvature) {
    r.origin_jet = w_jet({0.0, 0.0});
    r.kappa_magnitude = std::abs(signed_curvature(*r.origin_jet));
  }
  if (all || which == ExtremizerCheck::limit) {
    const auto pts = default_limit_points();
    const LimitFit fit = limit_ratio_check(a, pts);
    r.limit_constant = fit.constant;
    r.limit_max_error = fit.max_error;
  }
  return r;
}

}  // namespace lsl

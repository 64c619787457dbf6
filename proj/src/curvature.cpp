#include "lsl/curvature.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "lsl/error.hpp"

namespace lsl {

std::string_view to_string(CurvatureMethod m) {
  return m == CurvatureMethod::hessian ? "hessian" : "supdef";
}

double signed_curvature(const Jet2& j) {
  const double g2 = j.ux * j.ux + j.uy * j.uy;
  if (g2 == 0.0) throw Error(ErrorKind::degenerate_gradient, "zero gradient: curvature undefined");
  const double num = j.uy * j.uy * j.uxx - 2.0 * j.ux * j.uy * j.uxy + j.ux * j.ux * j.uyy;
  return -num / (g2 * std::sqrt(g2));
}

namespace {

struct Limit {
  double value;
  double residual;
};

// Second-order Richardson on samples at y0 2^-k. Picks the level where
// consecutive extrapolants agree best, which is where truncation and
// round-off balance.
Limit richardson_limit(const std::vector<double>& q) {
  const std::size_t n = q.size();
  std::vector<double> r1(n - 1), r2(n - 2);
  for (std::size_t k = 0; k + 1 < n; ++k) r1[k] = 2.0 * q[k + 1] - q[k];
  for (std::size_t k = 0; k + 1 < r1.size(); ++k) r2[k] = (4.0 * r1[k + 1] - r1[k]) / 3.0;
  Limit best{r2.back(), std::numeric_limits<double>::infinity()};
  for (std::size_t k = 0; k + 1 < r2.size(); ++k) {
    const double d = std::abs(r2[k + 1] - r2[k]);
    if (d < best.residual) best = {r2[k + 1], d};
  }
  return best;
}

}  // namespace

double sup_curvature_estimate(const HarmonicField& field, const SupdefOptions& opts,
                              double* residual) {
  const Jet2 j0 = field.origin_jet();
  const double sigma = std::hypot(j0.ux, j0.uy);
  if (sigma == 0.0) throw Error(ErrorKind::degenerate_gradient, "zero gradient at the origin");
  const double theta = std::atan2(j0.uy, j0.ux);

  auto probe = [&](double a) {
    std::vector<double> q(static_cast<std::size_t>(opts.halvings) + 1);
    double y = opts.y0;
    for (auto& v : q) {
      v = field.increment(rotate(Point{a * y * y, y}, theta)) / (y * y);
      y *= 0.5;
    }
    return richardson_limit(q);
  };
  const Limit q0 = probe(0.0);
  const Limit q1 = probe(1.0);
  const double res = std::max(q0.residual, q1.residual);
  if (residual) *residual = res;
  if (res > opts.residual_tol * sigma)
    throw Error(ErrorKind::non_convergence,
                "sup-definition limit did not converge (residual " + std::to_string(res) + ")", res);
  const double a_star = -q0.value / (q1.value - q0.value);
  return 2.0 * a_star;
}

double sup_curvature_estimate(const BoundaryMeasure& m, const SupdefOptions& opts) {
  return sup_curvature_estimate(MeasureField(m), opts);
}

CurvatureReport curvature_at_origin(const HarmonicField& field, CurvatureMethod method,
                                    double gradient_floor) {
  const Jet2 j0 = field.origin_jet();
  CurvatureReport r;
  r.method = method;
  r.sigma = std::hypot(j0.ux, j0.uy);
  if (!(r.sigma >= gradient_floor))
    throw Error(ErrorKind::degenerate_gradient,
                "origin gradient below threshold (sigma = " + std::to_string(r.sigma) + ")", r.sigma);
  r.grad_angle = Angle(std::atan2(j0.uy, j0.ux));
  if (method == CurvatureMethod::hessian)
    r.kappa_signed = signed_curvature(j0);
  else
    r.kappa_signed = sup_curvature_estimate(field, {}, &r.residual);
  return r;
}

CurvatureReport curvature_at_origin(const BoundaryMeasure& m, CurvatureMethod method) {
  return curvature_at_origin(MeasureField(m), method, 1e-12 * std::max(1.0, variation(m)));
}

}  // namespace lsl

#include "lsl/levelset.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <string>
#include <unordered_map>

#include "lsl/curvature.hpp"
#include "lsl/error.hpp"

namespace lsl {

namespace {

Point perp(Point g) { return {-g.y, g.x}; }

struct Corrected {
  Point p;
  bool ok;
};

// Newton on u along the gradient direction.
Corrected correct(const HarmonicField& f, Point q, const TraceOptions& o) {
  double dist = 0.0;
  for (int it = 0; it < o.newton_max_iter; ++it) {
    if (q.norm2() >= 1.0) return {q, false};
    const Jet2 j = f.level_jet(q);
    const double g2 = j.ux * j.ux + j.uy * j.uy;
    if (g2 == 0.0) return {q, false};
    dist = std::abs(j.u) / std::sqrt(g2);
    if (dist <= o.newton_tol) return {q, true};
    q = q - (j.u / g2) * j.gradient();
  }
  if (q.norm2() >= 1.0) return {q, false};
  const Jet2 j = f.level_jet(q);
  dist = std::abs(j.u) / std::hypot(j.ux, j.uy);
  return {q, dist <= o.accept_tol};
}

// Intersection of the level line with the circle |p| = r near angle phi.
Corrected correct_on_circle(const HarmonicField& f, double r, double phi, const TraceOptions& o) {
  for (int it = 0; it < o.newton_max_iter + 10; ++it) {
    const Point q{r * std::cos(phi), r * std::sin(phi)};
    const Jet2 j = f.level_jet(q);
    const double gnorm = std::hypot(j.ux, j.uy);
    if (std::abs(j.u) <= o.newton_tol * gnorm) return {q, true};
    const double dphi = j.ux * (-q.y) + j.uy * q.x;
    if (dphi == 0.0) return {q, false};
    double step = j.u / dphi;
    // Angular steps larger than the remaining gap to the boundary jump branches.
    const double cap = 0.5 * (1.0 - r) + 1e-3;
    step = std::clamp(step, -cap, cap);
    phi -= step;
  }
  const Point q{r * std::cos(phi), r * std::sin(phi)};
  const Jet2 j = f.level_jet(q);
  return {q, std::abs(j.u) <= o.accept_tol * std::hypot(j.ux, j.uy)};
}

struct Branch {
  std::vector<Point> pts;
  bool reached_stop = false;
  bool closed = false;
  bool saddle = false;
  bool capped = false;
};

Branch trace_branch(const HarmonicField& f, Point start_tangent, double sigma0,
                    const TraceOptions& o) {
  Branch br;
  Point p{0.0, 0.0};
  Point prev_t = start_tangent;
  double arc = 0.0;
  const double saddle_floor = 1e-9 * sigma0;

  while (true) {
    const Jet2 j = f.level_jet(p);
    const double gn = std::hypot(j.ux, j.uy);
    if (gn < saddle_floor) {
      br.saddle = true;
      return br;
    }
    Point t = (1.0 / gn) * perp(j.gradient());
    if (dot(t, prev_t) < 0.0) t = -1.0 * t;
    const double kappa = std::abs(signed_curvature(j));
    double h = std::min({o.h_max, o.curvature_step / (1.0 + kappa),
                         o.boundary_fraction * (1.0 - p.norm())});

    Corrected next{p, false};
    bool terminal = false;
    for (int attempt = 0; attempt < 40 && !next.ok; ++attempt, h *= 0.5) {
      const Point q = p + h * t;
      if (q.norm() >= o.r_stop) {
        next = correct_on_circle(f, o.r_stop, std::atan2(q.y, q.x), o);
        terminal = next.ok;
      } else {
        next = correct(f, q, o);
        if (next.ok && next.p.norm() >= o.r_stop) {
          next = correct_on_circle(f, o.r_stop, std::atan2(next.p.y, next.p.x), o);
          terminal = next.ok;
        }
      }
      if (next.ok) {
        const Point d = next.p - p;
        // Reject branch jumps: the step must stay short and move forward.
        if (d.norm() > 2.0 * h || dot(d, t) <= 0.0) next.ok = false;
      }
    }
    if (!next.ok)
      throw Error(ErrorKind::trace_failure,
                  "level-set corrector failed near (" + std::to_string(p.x) + ", " +
                      std::to_string(p.y) + ")",
                  p.norm());

    arc += (next.p - p).norm();
    br.pts.push_back(next.p);
    prev_t = t;
    p = next.p;
    if (terminal) {
      br.reached_stop = true;
      return br;
    }
    if (arc > 10.0 * o.h_max && p.norm() < 0.5 * o.h_max) {
      br.closed = true;
      return br;
    }
    if (arc > o.max_arc) {
      br.capped = true;
      return br;
    }
  }
}

}  // namespace

LevelCurve trace_zero_set(const HarmonicField& f, const TraceOptions& o) {
  const Jet2 j0 = f.level_jet({0.0, 0.0});
  const double sigma = std::hypot(j0.ux, j0.uy);
  if (sigma < 1e-10)
    throw Error(ErrorKind::degenerate_gradient,
                "level set is not transversal at the origin", sigma);
  const Point t0 = (1.0 / sigma) * perp(j0.gradient());

  LevelCurve c;
  const Branch fwd = trace_branch(f, t0, sigma, o);
  Branch bwd;
  if (!fwd.closed) bwd = trace_branch(f, -1.0 * t0, sigma, o);

  c.points.assign(bwd.pts.rbegin(), bwd.pts.rend());
  c.origin_index = c.points.size();
  c.points.push_back({0.0, 0.0});
  c.points.insert(c.points.end(), fwd.pts.begin(), fwd.pts.end());

  c.arc.resize(c.points.size());
  c.arc[0] = 0.0;
  for (std::size_t i = 1; i < c.points.size(); ++i)
    c.arc[i] = c.arc[i - 1] + (c.points[i] - c.points[i - 1]).norm();

  c.closed = fwd.closed;
  c.saddle = fwd.saddle || bwd.saddle;
  c.capped = fwd.capped || bwd.capped;
  if (fwd.reached_stop && bwd.reached_stop) {
    const Point& first = c.points.front();
    const Point& last = c.points.back();
    c.exit_angles = {Angle(std::atan2(first.y, first.x)), Angle(std::atan2(last.y, last.x))};
  }
  return c;
}

LevelCurve trace_zero_set(const BoundaryMeasure& m, const TraceOptions& o) {
  return trace_zero_set(MeasureField(m), o);
}

namespace {

int orientation(Point a, Point b, Point c) {
  const double v = cross(b - a, c - a);
  return (v > 0.0) - (v < 0.0);
}

bool on_segment(Point a, Point b, Point p) {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
         p.y <= std::max(a.y, b.y);
}

bool segments_intersect(Point p1, Point p2, Point q1, Point q2) {
  const int o1 = orientation(p1, p2, q1), o2 = orientation(p1, p2, q2);
  const int o3 = orientation(q1, q2, p1), o4 = orientation(q1, q2, p2);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment(p1, p2, q1)) return true;
  if (o2 == 0 && on_segment(p1, p2, q2)) return true;
  if (o3 == 0 && on_segment(q1, q2, p1)) return true;
  if (o4 == 0 && on_segment(q1, q2, p2)) return true;
  return false;
}

}  // namespace

bool polyline_self_intersects(std::span<const Point> pts) {
  if (pts.size() < 3) return false;
  const std::size_t nseg = pts.size() - 1;
  // adjacent segments only meet at their shared vertex unless the path folds back
  for (std::size_t i = 1; i + 1 < pts.size(); ++i) {
    const Point d1 = pts[i] - pts[i - 1], d2 = pts[i + 1] - pts[i];
    if (cross(d1, d2) == 0.0 && dot(d1, d2) < 0.0) return true;
  }
  if (pts.size() < 4) return false;

  // Uniform-grid broad phase; every candidate pair gets the exact test.
  double minx = pts[0].x, maxx = minx, miny = pts[0].y, maxy = miny, total = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    minx = std::min(minx, pts[i].x); maxx = std::max(maxx, pts[i].x);
    miny = std::min(miny, pts[i].y); maxy = std::max(maxy, pts[i].y);
    if (i) total += (pts[i] - pts[i - 1]).norm();
  }
  double cell = std::max(2.0 * total / static_cast<double>(nseg), 1e-12);
  const double span = std::max(maxx - minx, maxy - miny);
  cell = std::max(cell, span / 4096.0);

  auto key = [](long long ix, long long iy) { return (ix << 32) ^ (iy & 0xffffffffLL); };
  std::unordered_map<long long, std::vector<std::size_t>> grid;
  for (std::size_t i = 0; i < nseg; ++i) {
    const Point a = pts[i], b = pts[i + 1];
    const auto x0 = static_cast<long long>(std::floor((std::min(a.x, b.x) - minx) / cell));
    const auto x1 = static_cast<long long>(std::floor((std::max(a.x, b.x) - minx) / cell));
    const auto y0 = static_cast<long long>(std::floor((std::min(a.y, b.y) - miny) / cell));
    const auto y1 = static_cast<long long>(std::floor((std::max(a.y, b.y) - miny) / cell));
    for (long long ix = x0; ix <= x1; ++ix)
      for (long long iy = y0; iy <= y1; ++iy) grid[key(ix, iy)].push_back(i);
  }
  for (const auto& [k, segs] : grid) {
    for (std::size_t u = 0; u < segs.size(); ++u)
      for (std::size_t v = u + 1; v < segs.size(); ++v) {
        const std::size_t i = std::min(segs[u], segs[v]), j = std::max(segs[u], segs[v]);
        if (j == i + 1) continue;  // adjacent segments share an endpoint
        if (segments_intersect(pts[i], pts[i + 1], pts[j], pts[j + 1])) return true;
      }
  }
  return false;
}

bool is_simple_arc(const LevelCurve& c) {
  return !c.closed && !polyline_self_intersects(c.points);
}

double circle_fit_curvature(const LevelCurve& c, Point gradient) {
  const double g = gradient.norm();
  if (g == 0.0) throw Error(ErrorKind::degenerate_gradient, "zero gradient for circle fit");
  const Point n_hat = (1.0 / g) * gradient;
  const Point t_hat = perp(n_hat);
  const std::size_t lo = c.origin_index >= 2 ? c.origin_index - 2 : 0;
  const std::size_t hi = std::min(c.points.size(), c.origin_index + 3);
  // Circle through the origin tangent to t_hat: t^2 + n^2 = (2 / kappa) n.
  double num = 0.0, den = 0.0;
  for (std::size_t i = lo; i < hi; ++i) {
    if (i == c.origin_index) continue;
    const double t = dot(c.points[i], t_hat), n = dot(c.points[i], n_hat);
    const double r2 = t * t + n * n;
    num += n * r2;
    den += r2 * r2;
  }
  if (den == 0.0) throw Error(ErrorKind::invalid_input, "not enough points for a circle fit");
  return 2.0 * num / den;
}

std::pair<double, double> positivity_arc(const DensityGrid& d) {
  const std::size_t n = d.size();
  const std::size_t k0 = d.nearest_node(0.0);
  if (!(d[k0] > 0.0))
    throw Error(ErrorKind::invalid_input, "density is not positive at angle 0");

  // Walk from the node at angle 0 in both directions to the first sign change.
  auto crossing = [&](int dir) {
    for (std::size_t step = 1; step < n; ++step) {
      const auto ni = static_cast<long long>(n);
      auto wrap = [ni](long long k) { return static_cast<std::size_t>(((k % ni) + ni) % ni); };
      const auto base = static_cast<long long>(k0), s = static_cast<long long>(step);
      const std::size_t k = wrap(base + dir * s);
      const std::size_t kp = wrap(base + dir * (s - 1));
      if (d[k] <= 0.0) {
        const double f = d[kp] / (d[kp] - d[k]);
        return dir * (static_cast<double>(step) - 1.0 + f) * d.spacing() + d.node(k0);
      }
    }
    throw Error(ErrorKind::invalid_input, "density has no sign change");
  };
  const double b = crossing(+1);
  const double a = crossing(-1);

  int changes = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const bool pos = d[k] > 0.0, next = d[(k + 1) % n] > 0.0;
    if (pos != next) ++changes;
  }
  if (changes != 2)
    throw Error(ErrorKind::invalid_input,
                "density must have exactly two sign changes, found " + std::to_string(changes),
                changes);
  return {a, b};
}

bool cone_containment(const DensityGrid& d) {
  double l1 = 0.0;
  for (double v : d.values()) l1 += std::abs(v);
  l1 *= d.spacing();
  const double mean = d.integral();
  if (std::abs(mean) > 1e-8 * std::max(1.0, l1))
    throw Error(ErrorKind::invalid_input, "density must have zero mean", mean);
  const auto [a, b] = positivity_arc(d);

  const double mx = d.integrate([](double t) { return std::cos(t); });
  const double my = d.integrate([](double t) { return std::sin(t); });
  if (mx == 0.0 && my == 0.0) return true;
  const double phi = std::atan2(my, mx);
  constexpr double tol = 1e-12;
  for (double shift : {0.0, -two_pi, two_pi})
    if (phi + shift >= a - tol && phi + shift <= b + tol) return true;
  return false;
}

void write_curve_csv(std::ostream& os, const LevelCurve& c) {
  os << "s,x,y\n" << std::setprecision(17);
  for (std::size_t i = 0; i < c.points.size(); ++i)
    os << c.arc[i] << ',' << c.points[i].x << ',' << c.points[i].y << '\n';
}

void write_curve_svg(std::ostream& os, const LevelCurve& c) {
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"-1.05 -1.05 2.1 2.1\" "
        "width=\"512\" height=\"512\">\n"
     << "<g transform=\"scale(1,-1)\">\n"
     << "<circle cx=\"0\" cy=\"0\" r=\"1\" fill=\"none\" stroke=\"#888\" stroke-width=\"0.004\"/>\n"
     << "<path fill=\"none\" stroke=\"#c0392b\" stroke-width=\"0.006\" d=\"";
  os << std::setprecision(9);
  for (std::size_t i = 0; i < c.points.size(); ++i)
    os << (i ? " L " : "M ") << c.points[i].x << ' ' << c.points[i].y;
  os << "\"/>\n</g>\n</svg>\n";
}

}  // namespace lsl

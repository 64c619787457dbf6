#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <boost/math/tools/roots.hpp>
#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "lsl/curvature.hpp"
#include "lsl/error.hpp"
#include "lsl/extremizer.hpp"
#include "lsl/harness.hpp"
#include "lsl/levelset.hpp"
#include "lsl/transport.hpp"

using namespace lsl;

namespace {

// Root of u on the stop circle, bracketed around `guess`.
double circle_root(const HarmonicField& f, double r, double guess, double halfwidth) {
  auto g = [&](double t) { return f.increment(r * on_circle(t)); };
  double lo = guess - halfwidth, hi = guess + halfwidth;
  REQUIRE(g(lo) * g(hi) < 0);
  std::uintmax_t iters = 200;
  auto res = boost::math::tools::toms748_solve(g, lo, hi, boost::math::tools::eps_tolerance<double>(50), iters);
  return 0.5 * (res.first + res.second);
}

double angle_gap(double a, double b) { return std::abs(wrap_angle(a - b)); }

}  // namespace

TEST_CASE("straight level line is the y-axis") {
  const auto m = make_measure({{Angle(0.0), 1.0}, {Angle(pi), -1.0}});
  const LevelCurve c = trace_zero_set(m);
  REQUIRE(c.exit_angles);
  for (const Point& p : c.points) CHECK(std::abs(p.x) < 1e-9);
  CHECK(angle_gap(c.exit_angles->first.value(), -pi / 2) < 1e-9);
  CHECK(angle_gap(c.exit_angles->second.value(), pi / 2) < 1e-9);
  CHECK(is_simple_arc(c));
  CHECK(std::abs(circle_fit_curvature(c, {1, 0})) < 1e-6);
  CHECK(c.arc.back() == doctest::Approx(2 * 0.999).epsilon(1e-6));
}

TEST_CASE("curve points lie on the zero set and are ordered by arc") {
  const MeasureField f(transport_measure(TransportParams(-1.0, 0.5)));
  const LevelCurve c = trace_zero_set(f);
  REQUIRE(c.points.size() == c.arc.size());
  CHECK(c.points[c.origin_index].norm() == 0.0);
  for (std::size_t i = 0; i < c.points.size(); ++i) {
    const Jet2 j = f.level_jet(c.points[i]);
    CHECK(std::abs(j.u) / j.gradient().norm() < 1e-9);
    if (i > 0) CHECK(c.arc[i] > c.arc[i - 1]);
  }
  CHECK(c.points.front().norm() == doctest::Approx(0.999).epsilon(1e-12));
  CHECK(c.points.back().norm() == doctest::Approx(0.999).epsilon(1e-12));
}

TEST_CASE("exit angles match the boundary root oracle") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> a(-2.9, -0.2), b(0.2, 2.9);
  for (int i = 0; i < 40; ++i) {
    const MeasureField f(transport_measure(TransportParams(a(rng), b(rng))));
    const LevelCurve c = trace_zero_set(f);
    REQUIRE(c.exit_angles);
    CHECK(is_simple_arc(c));
    const double e1 = c.exit_angles->first.value(), e2 = c.exit_angles->second.value();
    CHECK(angle_gap(e1, circle_root(f, 0.999, e1, 1e-3)) < 1e-10);
    CHECK(angle_gap(e2, circle_root(f, 0.999, e2, 1e-3)) < 1e-10);
  }
}

TEST_CASE("transport curve for (-pi/2, pi/2) exits symmetrically") {
  // zero set of (1 - r^2) V: the curve leaves near +-0.9046, not at the atoms
  const LevelCurve c = trace_zero_set(transport_measure(TransportParams(-pi / 2, pi / 2)));
  REQUIRE(c.exit_angles);
  CHECK(c.exit_angles->first.value() == doctest::Approx(-c.exit_angles->second.value()).epsilon(1e-9));
  CHECK(c.exit_angles->second.value() == doctest::Approx(0.9046).epsilon(1e-3));
}

TEST_CASE("circle fit approximates kappa") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> a(-2.9, -0.2), b(0.2, 2.9);
  for (int i = 0; i < 20; ++i) {
    const auto m = transport_measure(TransportParams(a(rng), b(rng)));
    const LevelCurve c = trace_zero_set(m);
    const auto r = curvature_at_origin(m);
    CHECK(circle_fit_curvature(c, origin_jet_closed(m).gradient()) ==
          doctest::Approx(r.kappa_signed).epsilon(0.02));
  }
}

TEST_CASE("extremizer curve is the cubic loop") {
  const ExtremizerField f;
  const LevelCurve c = trace_zero_set(f);
  REQUIRE(c.exit_angles);
  for (const Point& p : c.points)
    CHECK(std::abs(p.x * (1 - p.x) * (1 - p.x) - p.y * p.y * (4 - p.x)) < 1e-9);
  CHECK(is_simple_arc(c));
  CHECK(std::abs(circle_fit_curvature(c, f.origin_jet().gradient())) == doctest::Approx(8.0).epsilon(0.02));
}

TEST_CASE("degenerate start throws") {
  const auto sym = make_measure({{Angle(pi / 2), 1.0}, {Angle(-pi / 2), 1.0}});
  CHECK_THROWS_AS(trace_zero_set(sym), Error);
}

TEST_CASE("polyline self intersection") {
  std::vector<Point> square{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  CHECK_FALSE(polyline_self_intersects(square));
  std::vector<Point> bow{{0, 0}, {1, 1}, {1, 0}, {0, 1}};
  CHECK(polyline_self_intersects(bow));
  std::vector<Point> back{{0, 0}, {1, 0}, {0.5, 0}};  // overlaps itself
  CHECK(polyline_self_intersects(back));
  std::vector<Point> line;
  for (int i = 0; i < 5000; ++i) line.push_back({1e-3 * i, std::sin(1e-3 * i)});
  CHECK_FALSE(polyline_self_intersects(line));
  line.push_back({2.0, -0.5});
  line.push_back({2.0, 2.0});
  CHECK(polyline_self_intersects(line));
}

TEST_CASE("positivity arc and cone containment") {
  const auto d = sample_density(256, [](double t) { return std::cos(t) - 0.2; });
  const auto [a, b] = positivity_arc(d);
  CHECK(a == doctest::Approx(-std::acos(0.2)).epsilon(0.03));
  CHECK(b == doctest::Approx(std::acos(0.2)).epsilon(0.03));
  const auto z = sample_density(256, [](double t) { return std::cos(t); });
  CHECK(cone_containment(z));
  const auto nonzero_mean = sample_density(256, [](double t) { return std::cos(t) + 0.1; });
  CHECK_THROWS_AS(cone_containment(nonzero_mean), Error);
  const auto shifted = sample_density(256, [](double t) { return std::cos(t - 1.0); });
  CHECK(cone_containment(shifted));
  const auto four = sample_density(256, [](double t) { return std::cos(2 * t); });
  CHECK_THROWS_AS(positivity_arc(four), Error);
}

TEST_CASE("cone containment on random densities") {
  for (std::uint64_t s = 0; s < 100; ++s) CHECK(cone_containment(sample_trig_density(s, 512)));
}

TEST_CASE("csv and svg output") {
  const LevelCurve c = trace_zero_set(transport_measure(TransportParams(-1.0, 1.0)));
  std::ostringstream csv, svg;
  write_curve_csv(csv, c);
  const std::string s = csv.str();
  CHECK(s.rfind("s,x,y\n", 0) == 0);
  CHECK(std::count(s.begin(), s.end(), '\n') == static_cast<long>(c.points.size() + 1));
  write_curve_svg(svg, c);
  CHECK(svg.str().find("<svg") != std::string::npos);
  CHECK(svg.str().find("<path") != std::string::npos);
  CHECK(svg.str().find("<circle") != std::string::npos);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "lsl/curvature.hpp"
#include "lsl/error.hpp"
#include "lsl/extremizer.hpp"
#include "lsl/poisson.hpp"
#include "lsl/transport.hpp"

using namespace lsl;

TEST_CASE("w values") {
  CHECK(w_eval({0, 0}) == 0.0);
  CHECK(w_eval({0.5, 0}) == doctest::Approx(-6.0));
  CHECK(w_eval({0, 0.5}) == doctest::Approx(0.384));
  CHECK_THROWS_AS(w_eval({1.0, 0.0}), Error);
  CHECK_NOTHROW(w_eval({1.0, 1e-6}));
}

TEST_CASE("w jet at the origin") {
  const Jet2 j = w_jet({0, 0});
  CHECK(j.u == 0.0);
  CHECK(j.ux == -1.0);
  CHECK(j.uy == 0.0);
  CHECK(j.uxx == -8.0);
  CHECK(j.uxy == 0.0);
  CHECK(j.uyy == 8.0);
  CHECK(std::abs(signed_curvature(j)) == doctest::Approx(8.0).epsilon(1e-15));
}

TEST_CASE("w jet matches finite differences of w_eval") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> r(0.0, 0.85), t(-pi, pi);
  const double h = 1e-4;
  for (int i = 0; i < 300; ++i) {
    const double rr = r(rng), tt = t(rng);
    const Point p{rr * std::cos(tt), rr * std::sin(tt)};
    const Jet2 j = w_jet(p);
    const double f0 = w_eval(p);
    auto f = [](Point q) { return w_eval(q); };
    const double ux = (f(p + Point{h, 0}) - f(p - Point{h, 0})) / (2 * h);
    const double uy = (f(p + Point{0, h}) - f(p - Point{0, h})) / (2 * h);
    const double uxx = (f(p + Point{h, 0}) - 2 * f0 + f(p - Point{h, 0})) / (h * h);
    const double uxy =
        (f(p + Point{h, h}) - f(p + Point{h, -h}) - f(p + Point{-h, h}) + f(p + Point{-h, -h})) / (4 * h * h);
    const double scale = 1 + std::abs(j.uxx) + std::abs(j.uxy) + std::abs(j.ux);
    CHECK(j.u == doctest::Approx(f0));
    CHECK(std::abs(j.ux - ux) < 1e-5 * scale);
    CHECK(std::abs(j.uy - uy) < 1e-5 * scale);
    CHECK(std::abs(j.uxx - uxx) < 1e-4 * scale);
    CHECK(std::abs(j.uxy - uxy) < 1e-4 * scale);
    CHECK(std::abs(j.laplacian()) < 1e-10 * scale);
  }
}

TEST_CASE("finite-difference harmonicity") {
  CHECK(std::abs(fd_laplacian_w({0.3, -0.4})) < 1e-9);
  CHECK(std::abs(fd_laplacian_w({0.9, 0.0})) < 1e-6);  // |w| is about 1.7e3 here
  const auto rep = run_extremizer_checks(ExtremizerCheck::harmonic);
  REQUIRE(rep.harmonicity_residual);
  CHECK(*rep.harmonicity_residual <= 1e-6);
  CHECK_FALSE(rep.origin_jet);
  CHECK_FALSE(rep.limit_constant);
}

TEST_CASE("normalized field has kappa +8") {
  const ExtremizerField f;
  const auto r = curvature_at_origin(f, CurvatureMethod::hessian);
  CHECK(r.kappa_signed == doctest::Approx(8.0));
  CHECK(r.sigma == doctest::Approx(1 / two_pi));
  CHECK(curvature_at_origin(f, CurvatureMethod::supdef).kappa_signed == doctest::Approx(8.0).epsilon(1e-6));
}

TEST_CASE("single point limit") {
  // second angular derivative of the kernel at (0.5, 0): -(1/(4 pi)) d2P = 3/pi
  const double a = 1e-2;
  const auto g = transport_measure(TransportParams(-a, a));
  const double ratio = MeasureField(g).increment({0.5, 0}) / (a * a);
  CHECK(ratio == doctest::Approx(3 / pi).epsilon(1e-3));
  CHECK(ratio / w_eval({0.5, 0}) == doctest::Approx(-1 / two_pi).epsilon(1e-3));
}

TEST_CASE("limit ratio converges at second order") {
  const auto pts = default_limit_points();
  CHECK(pts.size() == 50);
  for (const Point& p : pts) CHECK(p.norm() <= 0.9 + 1e-15);
  double prev_err = 0.0, prev_gap = 0.0;
  for (double a : {1e-2, 5e-3, 2.5e-3}) {
    const LimitFit fit = limit_ratio_check(a, pts);
    const double gap = std::abs(fit.constant + 1 / two_pi);
    if (prev_err > 0.0) {
      CHECK(prev_err / fit.max_error == doctest::Approx(4.0).epsilon(0.05));
      CHECK(prev_gap / gap == doctest::Approx(4.0).epsilon(0.05));
    }
    prev_err = fit.max_error;
    prev_gap = gap;
  }
  CHECK_THROWS_AS(limit_ratio_check(0.2, pts), Error);
  CHECK_THROWS_AS(limit_ratio_check(0.0, pts), Error);
}

TEST_CASE("limit max error is small relative to the field") {
  const auto pts = default_limit_points();
  const LimitFit fit = limit_ratio_check(1e-2, pts);
  double biggest = 0.0;
  for (const Point& p : pts) biggest = std::max(biggest, std::abs(fit.constant * w_eval(p)));
  CHECK(fit.max_error <= 1e-3 * biggest);
}

TEST_CASE("all checks report every field") {
  const auto rep = run_extremizer_checks(ExtremizerCheck::all);
  CHECK(rep.harmonicity_residual);
  CHECK(rep.origin_jet);
  CHECK(rep.kappa_magnitude);
  CHECK(rep.limit_constant);
  CHECK(rep.limit_max_error);
  CHECK(*rep.kappa_magnitude == doctest::Approx(8.0));
}

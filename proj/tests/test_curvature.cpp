#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "lsl/curvature.hpp"
#include "lsl/error.hpp"
#include "lsl/extremizer.hpp"
#include "lsl/transport.hpp"

using namespace lsl;

TEST_CASE("signed curvature examples") {
  Jet2 j;
  j.ux = 1 / pi;
  j.uyy = -4 / pi;
  CHECK(signed_curvature(j) == doctest::Approx(4.0));

  Jet2 line;
  line.ux = 1.0;
  CHECK(signed_curvature(line) == 0.0);

  Jet2 w = (-1 / two_pi) * w_jet({0, 0});
  CHECK(signed_curvature(w) == doctest::Approx(8.0));
  // odd under u -> -u
  CHECK(signed_curvature(w_jet({0, 0})) == doctest::Approx(-8.0));
}

TEST_CASE("signed curvature is rotation invariant") {
  // u = x - y^2 rotated by theta: gradient (c, s), Hessian R diag(0,-2) R^T
  for (double th : {0.0, 0.4, 1.9, -2.7}) {
    const double c = std::cos(th), s = std::sin(th);
    Jet2 j;
    j.ux = c;
    j.uy = s;
    j.uxx = -2 * s * s;
    j.uxy = 2 * s * c;
    j.uyy = -2 * c * c;
    CHECK(signed_curvature(j) == doctest::Approx(2.0));
  }
}

TEST_CASE("curvature of transport measures") {
  auto r = curvature_at_origin(transport_measure(TransportParams(-pi / 2, pi / 2)));
  CHECK(r.kappa_signed == doctest::Approx(4.0).epsilon(1e-13));
  CHECK(r.sigma == doctest::Approx(1 / pi));
  CHECK(r.grad_angle.value() == doctest::Approx(0.0));

  auto r2 = curvature_at_origin(transport_measure(TransportParams(-pi / 3, pi / 2)));
  CHECK(r2.kappa_signed == doctest::Approx(3 + std::sqrt(3.0)).epsilon(1e-12));

  auto rot = rotate_measure(transport_measure(TransportParams(-pi / 2, pi / 2)), Angle(1.0));
  auto r3 = curvature_at_origin(rot);
  CHECK(r3.kappa_signed == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(r3.grad_angle.value() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("supdef examples") {
  const auto mu = transport_measure(TransportParams(-pi / 2, pi / 2));
  CHECK(sup_curvature_estimate(mu) == doctest::Approx(4.0).epsilon(1e-6));
  const TransportParams p(-1.0, 0.5);
  CHECK(sup_curvature_estimate(transport_measure(p)) ==
        doctest::Approx(2 * (1 + std::cos(1.0) + 2 * std::cos(0.5))).epsilon(1e-6));
  CHECK(sup_curvature_estimate(atom_measure(0, 1)) == doctest::Approx(2.0).epsilon(1e-6));
  const auto rep = curvature_at_origin(MeasureField(mu), CurvatureMethod::supdef);
  CHECK(rep.method == CurvatureMethod::supdef);
  CHECK(rep.residual < 1e-6 * rep.sigma);
}

TEST_CASE("supdef handles either curvature sign and arbitrary gradient direction") {
  const auto mu = negate(rotate_measure(transport_measure(TransportParams(-0.8, 2.0)), Angle(2.5)));
  const auto h = curvature_at_origin(mu, CurvatureMethod::hessian);
  const auto s = curvature_at_origin(mu, CurvatureMethod::supdef);
  CHECK(h.kappa_signed < 0);
  CHECK(s.kappa_signed == doctest::Approx(h.kappa_signed).epsilon(1e-6));
}

TEST_CASE("degenerate gradient") {
  const auto sym = make_measure({{Angle(pi / 2), 1.0}, {Angle(-pi / 2), 1.0}});
  try {
    curvature_at_origin(sym);
    FAIL("expected degenerate");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::degenerate_gradient);
  }
  CHECK_THROWS_AS(curvature_at_origin(BoundaryMeasure{}, CurvatureMethod::supdef), Error);
}

TEST_CASE("straight level line") {
  // level set is the y-axis
  const auto m = make_measure({{Angle(0.0), 1.0}, {Angle(pi), -1.0}});
  CHECK(std::abs(curvature_at_origin(m).kappa_signed) < 1e-14);
  CHECK(std::abs(curvature_at_origin(m, CurvatureMethod::supdef).kappa_signed) < 1e-6);
}

TEST_CASE("dilation scales curvature linearly") {
  const auto mu = transport_measure(TransportParams(-pi / 2, pi / 2));
  CHECK(curvature_at_origin(DilatedField(mu, 0.5), CurvatureMethod::hessian).kappa_signed ==
        doctest::Approx(2.0).epsilon(1e-13));
  CHECK(curvature_at_origin(DilatedField(mu, 0.5), CurvatureMethod::supdef).kappa_signed ==
        doctest::Approx(2.0).epsilon(1e-6));
  const auto line = make_measure({{Angle(0.0), 1.0}, {Angle(pi), -1.0}});
  for (double r : {0.1, 0.5, 0.9}) CHECK(std::abs(curvature_at_origin(DilatedField(line, r), CurvatureMethod::hessian).kappa_signed) < 1e-14);
}

TEST_CASE("superposition law for aligned fields") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> a(-2.8, -0.2), b(0.2, 2.8), c(0.1, 3.0);
  for (int i = 0; i < 100; ++i) {
    const auto m1 = transport_measure(TransportParams(a(rng), b(rng)));
    const auto m2 = transport_measure(TransportParams(a(rng), b(rng)));
    const double c1 = c(rng), c2 = c(rng);
    const auto r1 = curvature_at_origin(combine(m1, m1, c1, 0.0));
    const auto r2 = curvature_at_origin(combine(m2, m2, c2, 0.0));
    const auto sum = curvature_at_origin(combine(m1, m2, c1, c2));
    const double law = weighted_curvature(r1.sigma, r1.kappa_signed, r2.sigma, r2.kappa_signed);
    CHECK(sum.kappa_signed == doctest::Approx(law).epsilon(1e-12));
  }
}

TEST_CASE("hessian and supdef agree on random atomic measures") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> ang(-pi, pi), w(-1, 1);
  int tested = 0;
  for (int i = 0; i < 200; ++i) {
    std::vector<Atom> atoms;
    for (int k = 0; k < 6; ++k) atoms.push_back({Angle(ang(rng)), w(rng)});
    const auto m = make_measure(atoms);
    const auto h = curvature_at_origin(m);
    if (h.sigma < 1e-3) continue;
    ++tested;
    const auto s = curvature_at_origin(m, CurvatureMethod::supdef);
    CHECK(std::abs(h.kappa_signed - s.kappa_signed) <= 1e-4 * (1 + std::abs(h.kappa_signed)));
  }
  CHECK(tested > 150);
}

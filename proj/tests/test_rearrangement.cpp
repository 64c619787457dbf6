#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <sstream>

#include "lsl/curvature.hpp"
#include "lsl/error.hpp"
#include "lsl/harness.hpp"
#include "lsl/rearrangement.hpp"
#include "lsl/transport.hpp"

using namespace lsl;

namespace {

BoundaryMeasure density_measure(std::size_t n, auto&& f) { return make_measure({}, sample_density(n, f)); }

BoundaryMeasure worked_f_example(std::size_t n) {
  return make_f_class(-pi / 2, pi / 2, sample_density(n, [](double t) { return std::min(std::cos(t), 0.0); }))
      .measure();
}

}  // namespace

TEST_CASE("pivot of an even density is 0") {
  const auto m = density_measure(256, [](double t) { return std::cos(t) + 0.3 * std::cos(3 * t); });
  CHECK(std::abs(claim2_pivot(m).t_star.value()) < 1e-12);
}

TEST_CASE("pivot of a shifted cosine") {
  const auto m = density_measure(512, [](double t) { return std::cos(t - 0.3); });
  const PivotResult p = claim2_pivot(m);
  CHECK(p.t_star.value() == doctest::Approx(0.3).epsilon(1e-6));
  CHECK(p.alignment_residual < 1e-12);
  CHECK(p.positive_mass == doctest::Approx(2.0).epsilon(1e-3));
}

TEST_CASE("pivot needs positive mass") {
  const auto m = density_measure(64, [](double) { return -1.0; });
  CHECK_THROWS_AS(claim2_pivot(m), Error);
  CHECK_THROWS_AS(claim2_pivot(atom_measure(0, 1)), Error);
}

TEST_CASE("sweep pair step") {
  const auto m = density_measure(256, [](double t) { return std::cos(t); });
  const DensityGrid& d = *m.density();
  const double h = d.spacing();
  const std::size_t kl = d.nearest_node(-1.0), kr = d.nearest_node(1.0);
  const auto s = sweep_pair_step(m, Angle(d.node(kl)), Angle(d.node(kr)), Angle(0.0));
  // symmetric bins: weights 1/2 each, both zeroed, pivot gains both masses
  CHECK((*s.density())[kl] == 0.0);
  CHECK((*s.density())[kr] == 0.0);
  CHECK(s.atom_weight(Angle(0.0)) == doctest::Approx(2 * d[kl] * h));
  CHECK(std::abs(total_mass(s) - total_mass(m)) < 1e-14);

  // weighted-average law for an asymmetric step
  const std::size_t kl2 = d.nearest_node(-1.2), kr2 = d.nearest_node(0.4);
  const auto s2 = sweep_pair_step(m, Angle(d.node(kl2)), Angle(d.node(kr2)), Angle(0.0));
  const auto r0 = curvature_at_origin(m), r1 = curvature_at_origin(s2);
  const auto added = curvature_at_origin(combine(s2, m, 1.0, -1.0));
  CHECK(added.kappa_signed ==
        doctest::Approx(transport_curvature_closed(TransportParams(d.node(kl2), d.node(kr2)))).epsilon(1e-10));
  CHECK(r1.kappa_signed ==
        doctest::Approx(weighted_curvature(r0.sigma, r0.kappa_signed, added.sigma, added.kappa_signed))
            .epsilon(1e-12));

  const auto empty = density_measure(256, [](double t) { return t > 0 ? std::cos(t) : -0.1; });
  CHECK_THROWS_AS(sweep_pair_step(empty, Angle(-1.0), Angle(1.0), Angle(0.0)), Error);
  CHECK_THROWS_AS(sweep_pair_step(m, Angle(0.5), Angle(1.0), Angle(0.0)), Error);
}

TEST_CASE("even input sweeps to one atom plus the negative part") {
  const auto m = sample_single_arc_measure(5, 256, true);
  const auto t = run_rearrangement(m, 100000, 1e-10);
  CHECK_FALSE(t.stalled);
  CHECK(t.steps.back().off_target_mass <= 1e-10 * t.initial_off_target);
  CHECK(std::abs(t.pivot.value()) < 1e-12);
  const DensityGrid& d0 = *m.density();
  const DensityGrid& d1 = *t.terminal_measure.density();
  for (std::size_t k = 0; k < d0.size(); ++k) {
    if (d0[k] < 0.0) CHECK(d1[k] == d0[k]);
    else CHECK(d1[k] <= 1e-10 * d0[k]);
  }
  REQUIRE(t.terminal_measure.atoms().size() == 1);
  CHECK(t.terminal_measure.atoms()[0].angle.value() == doctest::Approx(0.0));
  CHECK(std::abs(total_mass(t.terminal_measure)) < 1e-12);
}

TEST_CASE("random single-arc inputs") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto m = sample_single_arc_measure(seed, 256, seed % 2 == 0);
    const auto t = run_rearrangement(m, 100000, 1e-8);
    const double k0 = t.steps.front().kappa;
    CHECK_FALSE(t.stalled);
    CHECK(t.steps.back().off_target_mass <= 1e-8 * t.initial_off_target);
    CHECK(t.max_abs_mass <= 1e-12);
    for (const TraceStep& s : t.steps) {
      CHECK(s.kappa <= std::max(k0, 8.0) + 1e-8);
      if (s.law_residual) CHECK(*s.law_residual <= 1e-8);
    }
  }
}

TEST_CASE("F-form input is a fixed point") {
  const auto t = run_rearrangement(worked_f_example(256), 100, 1e-10);
  CHECK(t.steps.size() == 1);
  CHECK_FALSE(t.stalled);
}

TEST_CASE("worked F example curvature") {
  const double exact = 16.0 / (3.0 * (4.0 + pi));
  const auto r = curvature_at_origin(worked_f_example(8192));
  CHECK(r.kappa_signed == doctest::Approx(exact).epsilon(1e-6));
  CHECK(r.sigma == doctest::Approx((4 + pi) / two_pi).epsilon(1e-6));
}

TEST_CASE("eps rearrangement") {
  const auto m = worked_f_example(512);
  const auto t = run_eps_rearrangement(m, 0.5, 8);
  CHECK_FALSE(t.stalled);
  CHECK_FALSE(t.bound_violation);
  CHECK(t.max_abs_mass <= 1e-12);
  double eps = 0.5, prev = t.steps.front().kappa;
  for (std::size_t i = 0; i < t.steps.size(); ++i) {
    const TraceStep& s = t.steps[i];
    if (s.law_residual) CHECK(*s.law_residual <= 1e-8);
    CHECK(s.kappa <= 8.0);
    const bool round_end = i + 1 == t.steps.size() || t.steps[i + 1].round != s.round;
    if (i > 0 && round_end) {
      CHECK(s.kappa > prev);
      CHECK(s.kappa == doctest::Approx(h_curvature_closed(eps)).epsilon(1e-8));
      prev = s.kappa;
      eps *= 0.5;
    }
  }
  CHECK(eps == doctest::Approx(0.5 / 256));

  const auto zero = run_eps_rearrangement(m, 0.5, 0);
  CHECK(zero.steps.size() == 1);
  CHECK(max_atom_difference(zero.terminal_measure, m) == 0.0);
}

TEST_CASE("eps rearrangement preconditions") {
  const auto m = worked_f_example(256);
  CHECK_THROWS_AS(run_eps_rearrangement(m, 2.0, 1), Error);  // density nonzero inside
  CHECK_THROWS_AS(run_eps_rearrangement(negate(m), 0.5, 1), Error);
  CHECK_THROWS_AS(run_eps_rearrangement(m, 0.5, -1), Error);
}

TEST_CASE("snapshots and csv") {
  RearrangementOptions opts;
  opts.snapshot_every = 10;
  const auto t = run_rearrangement(sample_single_arc_measure(1, 256, false), 100000, 1e-8, opts);
  CHECK(t.snapshots.size() >= 2);
  CHECK(t.steps.front().snapshot == std::size_t{0});
  std::ostringstream os;
  write_trace_csv(os, t);
  CHECK(os.str().rfind("step,sigma,kappa,off_target_mass\n", 0) == 0);
}

#include "lsl/harness.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

#include "lsl/curvature.hpp"
#include "lsl/error.hpp"
#include "lsl/levelset.hpp"
#include "lsl/measure_io.hpp"
#include "lsl/transport.hpp"

namespace lsl {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  // splitmix64 finalizer
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

BoundaryMeasure FClassSpec::measure() const {
  return make_measure({{Angle(0.0), atom_weight}}, density);
}

FClassSpec make_f_class(double a, double b, DensityGrid density, std::uint64_t seed) {
  const double w = -density.integral();
  return FClassSpec{a, b, std::move(density), w, seed};
}

namespace {

struct Bump {
  double center, width, height;
  double operator()(double tau) const {
    const double d = std::abs(tau - center);
    return d < width ? 0.5 * height * (1.0 + std::cos(pi * d / width)) : 0.0;
  }
};

// Profile on [0, 1] vanishing at both ends: sin(pi tau) (c0 + bumps).
struct Profile {
  double c0 = 1.0;
  std::vector<Bump> bumps;

  static Profile random(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Profile p;
    p.c0 = 0.05 + 0.95 * u(rng);
    const int k = 1 + static_cast<int>(u(rng) * 4.0) % 4;
    for (int i = 0; i < k; ++i)
      p.bumps.push_back({u(rng), 0.05 + 0.45 * u(rng), 0.2 + 2.8 * u(rng)});
    return p;
  }

  double operator()(double tau) const {
    if (tau <= 0.0 || tau >= 1.0) return 0.0;
    double s = c0;
    for (const Bump& b : bumps) s += b(tau);
    return std::sin(pi * tau) * s;
  }
};

// Position along the arc from `from` counter-clockwise, normalized by its length.
double arc_param(double t, double from, double length) {
  double d = std::fmod(t - from, two_pi);
  if (d < 0.0) d += two_pi;
  return d / length;
}

}  // namespace

FClassSpec sample_f_class(std::uint64_t seed, std::size_t n) {
  if (n < 64) throw Error(ErrorKind::invalid_input, "F-class grids need n >= 64", static_cast<double>(n));
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double a = (-pi + 0.1) + u(rng) * ((-0.05) - (-pi + 0.1));
  const double b = 0.05 + u(rng) * ((pi - 0.1) - 0.05);
  const Profile prof = Profile::random(rng);
  const double len = two_pi - (b - a);
  DensityGrid d = sample_density(n, [&](double t) {
    if (t >= a && t <= b) return 0.0;
    return -prof(arc_param(t, b, len));
  });
  return make_f_class(a, b, std::move(d), seed);
}

BoundaryMeasure sample_single_arc_measure(std::uint64_t seed, std::size_t n, bool symmetric) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double a = -(0.3 + 2.2 * u(rng));
  const double b = symmetric ? -a : 0.3 + 2.2 * u(rng);
  const Profile pos = Profile::random(rng);
  Profile neg = Profile::random(rng);
  const double len_pos = b - a, len_neg = two_pi - len_pos;

  std::function<double(double)> shape;
  if (symmetric) {
    // even layout: profile halves mirrored about 0 and pi
    shape = [=](double t) {
      t = std::abs(t);
      if (t < b) return pos(0.5 + 0.5 * t / b);
      return -neg(0.5 * (t - b) / (pi - b));
    };
  } else {
    shape = [=](double t) {
      if (t > a && t < b) return pos(arc_param(t, a, len_pos));
      return -neg(arc_param(t, b, len_neg));
    };
  }
  const DensityGrid raw = sample_density(n, shape);
  double plus = 0.0, minus = 0.0;
  for (double v : raw.values()) (v > 0.0 ? plus : minus) += v;
  const double scale = plus / -minus;
  return make_measure({}, sample_density(n, [&](double t) {
                        const double v = shape(t);
                        return v > 0.0 ? v : scale * v;
                      }));
}

DensityGrid sample_trig_density(std::uint64_t seed, std::size_t n) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int attempt = 0; attempt < 10000; ++attempt) {
    double c[4] = {0, 0, 0, 0}, s[4] = {0, 0, 0, 0};
    for (int k = 1; k <= 3; ++k) {
      c[k] = g(rng) / k;
      s[k] = g(rng) / k;
    }
    auto f = [&](double t) {
      double v = 0.0;
      for (int k = 1; k <= 3; ++k) v += c[k] * std::cos(k * t) + s[k] * std::sin(k * t);
      return v;
    };
    const DensityGrid raw = sample_density(n, f);
    int changes = 0;
    std::size_t up = n;  // node where the density turns positive
    for (std::size_t k = 0; k < n; ++k) {
      const bool p0 = raw[k] > 0.0, p1 = raw[(k + 1) % n] > 0.0;
      if (p0 != p1) {
        ++changes;
        if (p1) up = (k + 1) % n;
      }
    }
    if (changes != 2 || up == n) continue;
    std::size_t len = 0;
    while (raw[(up + len) % n] > 0.0) ++len;
    const double mid = raw.node(up) + 0.5 * static_cast<double>(len - 1) * raw.spacing();
    DensityGrid centred = sample_density(n, [&](double t) { return f(t + mid); });
    int check = 0;
    for (std::size_t k = 0; k < n; ++k)
      if ((centred[k] > 0.0) != (centred[(k + 1) % n] > 0.0)) ++check;
    if (check == 2 && centred[centred.nearest_node(0.0)] > 0.0) return centred;
  }
  throw Error(ErrorKind::internal, "could not sample a two-sign-change density");
}

SampleOutcome evaluate_f_sample(const FClassSpec& spec) {
  SampleOutcome out;
  const BoundaryMeasure m = spec.measure();
  const MeasureField field(m);
  try {
    out.kappa_hessian =
        curvature_at_origin(field, CurvatureMethod::hessian, 1e-12 * field.scale()).kappa_signed;
  } catch (const Error& e) {
    out.exclusion = "degenerate";
    return out;
  }
  try {
    out.kappa_supdef =
        curvature_at_origin(field, CurvatureMethod::supdef, 1e-12 * field.scale()).kappa_signed;
  } catch (const Error& e) {
    out.exclusion = "supdef";
    return out;
  }
  try {
    const LevelCurve c = trace_zero_set(field);
    if (c.saddle || c.capped || !is_simple_arc(c)) {
      out.exclusion = "not_simple";
      return out;
    }
  } catch (const Error& e) {
    out.exclusion = e.kind() == ErrorKind::degenerate_gradient ? "degenerate" : "trace_failure";
    return out;
  }
  out.included = true;
  return out;
}

namespace {

FalsifyReport reduce(std::span<const SampleOutcome> outcomes,
                     const std::function<FClassSpec(std::size_t)>& spec_at) {
  FalsifyReport r;
  r.samples = outcomes.size();
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    const SampleOutcome& o = outcomes[i];
    if (!o.included) {
      ++r.excluded;
      if (o.exclusion == "degenerate") ++r.excluded_degenerate;
      else if (o.exclusion == "not_simple") ++r.excluded_not_simple;
      else if (o.exclusion == "supdef") ++r.excluded_supdef;
      else ++r.excluded_trace_failure;
      continue;
    }
    const double k = std::abs(o.kappa_hessian);
    r.max_method_gap =
        std::max(r.max_method_gap, std::abs(o.kappa_hessian - o.kappa_supdef) / (1.0 + k));
    if (!r.argmax_index || k > r.max_kappa) {
      r.max_kappa = k;
      r.argmax_index = i;
    }
    if (!r.counterexample_index && std::max(k, std::abs(o.kappa_supdef)) > falsify_threshold)
      r.counterexample_index = i;
  }
  if (r.argmax_index) r.argmax_spec = spec_at(*r.argmax_index);
  return r;
}

template <class SpecAt>
std::vector<SampleOutcome> evaluate_all(std::size_t count, SpecAt&& spec_at, Exec exec) {
  std::vector<SampleOutcome> out(count);
  const auto n = static_cast<long long>(count);
  if (exec == Exec::serial) {
    for (long long i = 0; i < n; ++i) out[i] = evaluate_f_sample(spec_at(static_cast<std::size_t>(i)));
    return out;
  }
#pragma omp parallel for schedule(dynamic, 4) num_threads(thread_count())
  for (long long i = 0; i < n; ++i) {
    try {
      out[i] = evaluate_f_sample(spec_at(static_cast<std::size_t>(i)));
    } catch (...) {
      out[i].exclusion = "trace_failure";
    }
  }
  return out;
}

void finish(FalsifyReport& r, const std::function<FClassSpec(std::size_t)>& spec_at,
            FalsifyReport* report_out) {
  if (report_out) *report_out = r;
  if (r.counterexample_index) {
    const FClassSpec s = spec_at(*r.counterexample_index);
    throw Error(ErrorKind::counterexample,
                "kappa above 8 on an included sample: " + measure_to_json(s.measure()).dump(),
                static_cast<double>(*r.counterexample_index));
  }
}

}  // namespace

FalsifyReport falsify_batch(std::size_t count, std::uint64_t seed, std::size_t n, Exec exec,
                            FalsifyReport* report_out) {
  if (count == 0) throw Error(ErrorKind::invalid_input, "falsify needs at least one sample");
  auto spec_at = [&](std::size_t i) { return sample_f_class(derive_seed(seed, i), n); };
  const auto outcomes = evaluate_all(count, spec_at, exec);
  FalsifyReport r = reduce(outcomes, spec_at);
  r.seed = seed;
  r.grid = n;
  finish(r, spec_at, report_out);
  return r;
}

FalsifyReport falsify_specs(std::span<const FClassSpec> specs, Exec exec, FalsifyReport* report_out) {
  if (specs.empty()) throw Error(ErrorKind::invalid_input, "falsify needs at least one sample");
  auto spec_at = [&](std::size_t i) { return specs[i]; };
  const auto outcomes = evaluate_all(specs.size(), spec_at, exec);
  FalsifyReport r = reduce(outcomes, spec_at);
  r.grid = specs.front().density.size();
  finish(r, spec_at, report_out);
  return r;
}

nlohmann::json FalsifyReport::to_json() const {
  nlohmann::json j;
  j["samples"] = samples;
  j["seed"] = seed;
  j["grid"] = grid;
  j["max_kappa"] = max_kappa;
  j["excluded"] = excluded;
  j["excluded_by_reason"] = {{"degenerate", excluded_degenerate},
                             {"not_simple", excluded_not_simple},
                             {"trace_failure", excluded_trace_failure},
                             {"supdef", excluded_supdef}};
  j["max_method_gap"] = max_method_gap;
  if (argmax_index && argmax_spec) {
    j["argmax"] = {{"index", *argmax_index},
                   {"seed", argmax_spec->seed},
                   {"a", argmax_spec->a},
                   {"b", argmax_spec->b},
                   {"atom_weight", argmax_spec->atom_weight}};
  } else {
    j["argmax"] = nullptr;
  }
  j["counterexample"] = counterexample_index ? nlohmann::json(*counterexample_index) : nlohmann::json(nullptr);
  return j;
}

std::vector<SweepRow> sweep_symmetric(std::span<const double> a_values, Exec exec) {
  for (double a : a_values)
    if (!(a > 0.0 && a < pi)) throw Error(ErrorKind::invalid_input, "sweep values must lie in (0, pi)", a);
  std::vector<SweepRow> rows(a_values.size());
  auto one = [&](std::size_t i) {
    const double a = a_values[i];
    const TransportParams tp(-a, a);
    SweepRow r;
    r.a = a;
    r.kappa_closed = 8.0 * std::cos(0.5 * a) * std::cos(0.5 * a);  // 4 (1 + cos a)
    r.kappa_numeric = curvature_at_origin(transport_measure(tp)).kappa_signed;
    r.difference = r.kappa_numeric - r.kappa_closed;
    rows[i] = r;
  };
  const auto n = static_cast<long long>(a_values.size());
  if (exec == Exec::serial) {
    for (long long i = 0; i < n; ++i) one(static_cast<std::size_t>(i));
  } else {
#pragma omp parallel for schedule(static) num_threads(thread_count())
    for (long long i = 0; i < n; ++i) one(static_cast<std::size_t>(i));
  }
  return rows;
}

}  // namespace lsl

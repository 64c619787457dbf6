#include "lsl/rearrangement.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <ostream>
#include <string>

#include "lsl/curvature.hpp"
#include "lsl/error.hpp"
#include "lsl/levelset.hpp"
#include "lsl/transport.hpp"

namespace lsl {

namespace {

constexpr double kappa_bound = 8.0 + 1e-8;

// Nodes this close to the pivot already sit on it.
constexpr double on_pivot = 1e-9;

const DensityGrid& require_density(const BoundaryMeasure& m) {
  if (!m.density())
    throw Error(ErrorKind::invalid_input, "rearrangement needs a density");
  return *m.density();
}

Point positive_moment(const DensityGrid& d, double* mass) {
  Point acc;
  double p = 0.0;
  for (std::size_t k = 0; k < d.size(); ++k) {
    if (d[k] <= 0.0) continue;
    const double t = d.node(k);
    acc.x += d[k] * std::cos(t);
    acc.y += d[k] * std::sin(t);
    p += d[k];
  }
  if (mass) *mass = p * d.spacing();
  return d.spacing() * acc;
}

double misalignment(const Jet2& j, double direction) {
  return std::abs(wrap_angle(std::atan2(j.uy, j.ux) - direction));
}

BoundaryMeasure assemble(const std::map<double, double>& atoms, const std::vector<double>& v) {
  std::vector<Atom> list;
  list.reserve(atoms.size());
  for (const auto& [t, w] : atoms) list.push_back({Angle(t), w});
  return make_measure(std::move(list), DensityGrid(v));
}

struct Recorder {
  RearrangementTrace& trace;
  const RearrangementOptions& opts;

  void record(TraceStep s, const BoundaryMeasure& m, bool force_snapshot) {
    const double mass = total_mass(m);
    trace.max_abs_mass = std::max(trace.max_abs_mass, std::abs(mass));
    if (s.kappa > kappa_bound) trace.bound_violation = true;
    if (force_snapshot || (opts.snapshot_every && s.step % opts.snapshot_every == 0)) {
      s.snapshot = trace.snapshots.size();
      trace.snapshots.push_back(m);
    }
    trace.steps.push_back(s);
  }
};

TraceStep state_step(std::size_t step, int round, const Jet2& j, double direction,
                     double off_target, double alignment_tol) {
  TraceStep s;
  s.step = step;
  s.round = round;
  s.sigma = std::hypot(j.ux, j.uy);
  if (s.sigma > 0.0) s.kappa = signed_curvature(j);
  s.off_target_mass = off_target;
  s.grad_misalignment = misalignment(j, direction);
  s.aligned = s.grad_misalignment <= alignment_tol;
  return s;
}

}  // namespace

PivotResult claim2_pivot(const BoundaryMeasure& m, double tol) {
  const DensityGrid& d = require_density(m);
  double mass = 0.0;
  const Point a_vec = positive_moment(d, &mass);
  if (!(mass > 0.0))
    throw Error(ErrorKind::invalid_input, "density has no positive part");
  const auto [a, b] = positivity_arc(d);

  // cross(e_t, A) decreases through zero at t = arg A and increases at the
  // antipode, so look for a + to - change.
  auto f = [&](double t) { return a_vec.y * std::cos(t) - a_vec.x * std::sin(t); };
  constexpr int scan = 256;
  double lo = 0.0, hi = 0.0;
  bool found = false;
  for (int i = 0; i < scan && !found; ++i) {
    const double t0 = a + (b - a) * i / scan, t1 = a + (b - a) * (i + 1) / scan;
    if (f(t0) > 0.0 && f(t1) <= 0.0) {
      lo = t0;
      hi = t1;
      found = true;
    }
  }
  if (!found)
    throw Error(ErrorKind::pivot_not_found, "alignment function has no sign change on (a, b)");
  // Bisect to machine resolution: leftover positive mass after the sweep
  // scales with the pivot error.
  while (true) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (f(mid) > 0.0 ? lo : hi) = mid;
  }
  const double t = 0.5 * (lo + hi);
  PivotResult r;
  r.t_star = Angle(t);
  r.alignment_residual = std::abs(wrap_angle(std::atan2(a_vec.y, a_vec.x) - t));
  r.positive_mass = mass;
  if (r.alignment_residual > tol)
    throw Error(ErrorKind::pivot_not_found, "pivot bisection did not reach tolerance",
                r.alignment_residual);
  return r;
}

namespace {

struct PairStep {
  double intensity;
  double rel_left, rel_right;
};

// Applies one greedy sweep increment to the node values; zeroes at least
// one of the two bins exactly.
PairStep apply_pair(std::vector<double>& v, const DensityGrid& grid, std::size_t kl,
                    std::size_t kr, double pivot) {
  const double h = grid.spacing();
  const double rl = wrap_angle(grid.node(kl) - pivot), rr = wrap_angle(grid.node(kr) - pivot);
  const TransportParams tp(rl, rr);
  const double wl = tp.weight_a(), wr = tp.weight_b();
  const double cl = v[kl] * h / wl, cr = v[kr] * h / wr;
  const double c = std::min(cl, cr);
  if (cl <= cr) {
    v[kl] = 0.0;
    v[kr] = std::max(0.0, v[kr] - c * wr / h);
  } else {
    v[kr] = 0.0;
    v[kl] = std::max(0.0, v[kl] - c * wl / h);
  }
  return {c, rl, rr};
}

}  // namespace

BoundaryMeasure sweep_pair_step(const BoundaryMeasure& m, Angle left, Angle right, Angle pivot) {
  const DensityGrid& d = require_density(m);
  const double rl = wrap_angle(left.value() - pivot.value());
  const double rr = wrap_angle(right.value() - pivot.value());
  if (!(rl < 0.0 && rr > 0.0))
    throw Error(ErrorKind::invalid_input, "need left < pivot < right");
  const std::size_t kl = d.nearest_node(left.value()), kr = d.nearest_node(right.value());
  if (!(d[kl] > 0.0) || !(d[kr] > 0.0))
    throw Error(ErrorKind::invalid_input, "both bins must carry positive density");
  std::vector<double> v(d.values().begin(), d.values().end());
  const PairStep s = apply_pair(v, d, kl, kr, pivot.value());
  std::vector<Atom> atoms(m.atoms().begin(), m.atoms().end());
  atoms.push_back({pivot, s.intensity});
  return make_measure(std::move(atoms), DensityGrid(std::move(v)));
}

RearrangementTrace run_rearrangement(const BoundaryMeasure& m, std::size_t max_steps, double tol,
                                     const RearrangementOptions& opts) {
  const DensityGrid& grid = require_density(m);
  if (std::none_of(grid.values().begin(), grid.values().end(), [](double x) { return x > 0.0; })) {
    // nothing to sweep: already an atom plus nonpositive density
    RearrangementTrace trace;
    double best = 0.0;
    for (const Atom& a : m.atoms())
      if (a.weight > best) {
        best = a.weight;
        trace.pivot = a.angle;
      }
    Recorder rec{trace, opts};
    rec.record(state_step(0, 0, origin_jet_closed(m), trace.pivot.value(), 0.0, opts.alignment_tol), m,
               true);
    trace.terminal_measure = m;
    return trace;
  }
  const PivotResult piv = claim2_pivot(m, opts.pivot_tol);
  const double p = piv.t_star.value();
  const double h = grid.spacing();
  const std::size_t n = grid.size();

  RearrangementTrace trace;
  trace.pivot = piv.t_star;
  Recorder rec{trace, opts};

  std::map<double, double> atoms;
  for (const Atom& a : m.atoms()) atoms[a.angle.value()] += a.weight;
  std::vector<double> v(grid.values().begin(), grid.values().end());

  std::vector<double> rel(n);
  for (std::size_t k = 0; k < n; ++k) rel[k] = wrap_angle(grid.node(k) - p);
  for (std::size_t k = 0; k < n; ++k)
    if (v[k] > 0.0 && std::abs(rel[k]) <= on_pivot) {
      atoms[p] += v[k] * h;
      v[k] = 0.0;
    }

  auto off_target = [&] {
    double s = 0.0;
    for (double x : v)
      if (x > 0.0) s += x;
    return s * h;
  };

  BoundaryMeasure cur = assemble(atoms, v);
  Jet2 jet = origin_jet_closed(cur);
  trace.initial_off_target = off_target();
  rec.record(state_step(0, 0, jet, p, trace.initial_off_target, opts.alignment_tol), cur, true);

  for (std::size_t step = 1; step <= max_steps; ++step) {
    if (off_target() <= tol * trace.initial_off_target) break;
    // Outermost positive bins on each side of the pivot.
    std::size_t kl = n, kr = n;
    for (std::size_t k = 0; k < n; ++k) {
      if (!(v[k] > 0.0)) continue;
      if (rel[k] < 0.0 && (kl == n || rel[k] < rel[kl])) kl = k;
      if (rel[k] > 0.0 && (kr == n || rel[k] > rel[kr])) kr = k;
    }
    if (kl == n || kr == n) {
      trace.stalled = true;
      break;
    }

    const TraceStep& prev = trace.steps.back();
    const PairStep ps = apply_pair(v, grid, kl, kr, p);
    atoms[p] += ps.intensity;

    cur = assemble(atoms, v);
    jet = origin_jet_closed(cur);
    TraceStep s = state_step(step, 0, jet, p, off_target(), opts.alignment_tol);
    if (prev.aligned && s.aligned) {
      const TransportParams tp(ps.rel_left, ps.rel_right);
      const double sigma_g =
          ps.intensity *
          (1.0 - tp.weight_a() * std::cos(ps.rel_left) - tp.weight_b() * std::cos(ps.rel_right)) / pi;
      const double predicted =
          weighted_curvature(prev.sigma, prev.kappa, sigma_g, transport_curvature_closed(tp));
      s.law_residual = std::abs(s.kappa - predicted);
    }
    rec.record(s, cur, false);
  }
  if (trace.steps.back().off_target_mass > tol * trace.initial_off_target) trace.stalled = true;
  trace.terminal_measure = cur;
  if (!trace.steps.back().snapshot) {
    trace.steps.back().snapshot = trace.snapshots.size();
    trace.snapshots.push_back(cur);
  }
  return trace;
}

RearrangementTrace run_eps_rearrangement(const BoundaryMeasure& m, double eps0, int rounds,
                                         std::size_t max_steps, double tol,
                                         const RearrangementOptions& opts) {
  const DensityGrid& grid = require_density(m);
  if (!(eps0 > 0.0 && eps0 < pi))
    throw Error(ErrorKind::invalid_input, "eps0 must lie in (0, pi)", eps0);
  if (rounds < 0) throw Error(ErrorKind::invalid_input, "rounds must be nonnegative");
  if (!(m.atom_weight(Angle(0.0)) > 0.0))
    throw Error(ErrorKind::invalid_input, "expected a positive atom at angle 0");
  const std::size_t n = grid.size();
  const double h = grid.spacing();
  for (std::size_t k = 0; k < n; ++k) {
    if (grid[k] > 0.0)
      throw Error(ErrorKind::invalid_input, "density must be nonpositive", static_cast<double>(k));
    if (grid[k] < 0.0 && std::abs(grid.node(k)) <= eps0)
      throw Error(ErrorKind::invalid_input, "density must vanish on [-eps0, eps0]",
                  static_cast<double>(k));
  }

  RearrangementTrace trace;
  trace.pivot = Angle(0.0);
  Recorder rec{trace, opts};

  std::map<double, double> atoms;
  for (const Atom& a : m.atoms()) atoms[a.angle.value()] += a.weight;
  std::vector<double> v(grid.values().begin(), grid.values().end());

  // Negative mass strictly outside (-eps, eps).
  auto off_target = [&](double eps) {
    double s = 0.0;
    for (std::size_t k = 0; k < n; ++k)
      if (v[k] < 0.0 && std::abs(grid.node(k)) > eps) s -= v[k] * h;
    for (const auto& [t, w] : atoms)
      if (w < 0.0 && std::abs(t) > eps) s -= w;
    return s;
  };

  BoundaryMeasure cur = assemble(atoms, v);
  Jet2 jet = origin_jet_closed(cur);
  trace.initial_off_target = off_target(eps0);
  rec.record(state_step(0, 0, jet, 0.0, trace.initial_off_target, opts.alignment_tol), cur, true);

  std::size_t step = 0;
  double eps = eps0;
  for (int r = 0; r < rounds && !trace.stalled; ++r, eps *= 0.5) {
    const double start = off_target(eps);
    while (off_target(eps) > tol * std::max(start, 1e-300)) {
      if (step >= max_steps) {
        trace.stalled = true;
        break;
      }
      // Mass at the antipode has no (a, b) pair; the symmetric limit a -> -pi,
      // b -> pi moves it with weights 1/2, 1/2 (mu = d_eps + d_-eps - 2 d_pi).
      double antipodal = 0.0;
      if (std::abs(grid.node(0)) == pi && v[0] < 0.0) antipodal -= v[0] * h;
      if (auto it = atoms.find(pi); it != atoms.end() && it->second < 0.0) antipodal -= it->second;
      if (antipodal > 0.0) {
        const TraceStep& prev = trace.steps.back();
        const double c = 0.5 * antipodal;
        if (std::abs(grid.node(0)) == pi) v[0] = std::max(v[0], 0.0);
        if (auto it = atoms.find(pi); it != atoms.end() && it->second < 0.0) atoms.erase(it);
        atoms[eps] -= c;
        atoms[-eps] -= c;
        ++step;
        cur = assemble(atoms, v);
        jet = origin_jet_closed(cur);
        TraceStep s = state_step(step, r, jet, 0.0, off_target(eps), opts.alignment_tol);
        if (prev.aligned && s.aligned) {
          const Jet2 g = origin_jet_closed(make_measure(
              {{Angle(eps), 1.0}, {Angle(-eps), 1.0}, {Angle(pi), -2.0}}));
          const double ux_added = -c * g.ux;
          s.law_residual = std::abs(
              s.kappa - (prev.sigma * prev.kappa + ux_added * (-g.uyy / g.ux)) / (prev.sigma + ux_added));
        }
        rec.record(s, cur, false);
        continue;
      }

      // Outermost negative item on each side: a grid node or an atom.
      enum class Kind { none, node, atom };
      struct Item { Kind kind = Kind::none; double angle = 0.0; std::size_t k = 0; double mass = 0.0; };
      Item left, right;
      auto consider = [&](Kind kind, double t, std::size_t k, double mass) {
        if (t < -eps && (left.kind == Kind::none || t < left.angle)) left = {kind, t, k, mass};
        if (t > eps && (right.kind == Kind::none || t > right.angle)) right = {kind, t, k, mass};
      };
      for (std::size_t k = 0; k < n; ++k)
        if (v[k] < 0.0) consider(Kind::node, grid.node(k), k, -v[k] * h);
      for (const auto& [t, w] : atoms)
        if (w < 0.0) consider(Kind::atom, t, 0, -w);
      if (left.kind == Kind::none || right.kind == Kind::none) {
        trace.stalled = true;
        break;
      }

      const TraceStep& prev = trace.steps.back();
      const TransportParams tp(left.angle, right.angle, eps);
      const double wl = 2.0 * tp.weight_a(), wr = 2.0 * tp.weight_b();
      const double c = std::min(left.mass / wl, right.mass / wr);
      auto take = [&](const Item& it, double amount, bool exhaust) {
        if (it.kind == Kind::node) {
          v[it.k] = exhaust ? 0.0 : std::min(0.0, v[it.k] + amount / h);
        } else {
          double& w = atoms[it.angle];
          w = exhaust ? 0.0 : std::min(0.0, w + amount);
          if (w == 0.0) atoms.erase(it.angle);
        }
      };
      const bool left_limits = left.mass / wl <= right.mass / wr;
      take(left, c * wl, left_limits);
      take(right, c * wr, !left_limits);
      atoms[eps] -= c;
      atoms[-eps] -= c;

      ++step;
      cur = assemble(atoms, v);
      jet = origin_jet_closed(cur);
      TraceStep s = state_step(step, r, jet, 0.0, off_target(eps), opts.alignment_tol);
      if (prev.aligned && s.aligned) {
        const Jet2 g = origin_jet_closed(eps_transport_measure(tp));
        const double ux_added = -c * g.ux;
        const double kappa_g = -g.uyy / g.ux;
        const double prev_ux = prev.sigma;  // aligned with +x
        s.law_residual = std::abs(
            s.kappa - (prev_ux * prev.kappa + ux_added * kappa_g) / (prev_ux + ux_added));
      }
      rec.record(s, cur, false);
    }
  }
  trace.terminal_measure = cur;
  if (!trace.steps.back().snapshot) {
    trace.steps.back().snapshot = trace.snapshots.size();
    trace.snapshots.push_back(cur);
  }
  return trace;
}

void write_trace_csv(std::ostream& os, const RearrangementTrace& t) {
  os << "step,sigma,kappa,off_target_mass\n" << std::setprecision(17);
  for (const TraceStep& s : t.steps)
    os << s.step << ',' << s.sigma << ',' << s.kappa << ',' << s.off_target_mass << '\n';
}

}  // namespace lsl

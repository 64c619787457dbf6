#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "lsl/curvature.hpp"
#include "lsl/error.hpp"
#include "lsl/extremizer.hpp"
#include "lsl/harness.hpp"
#include "lsl/levelset.hpp"
#include "lsl/measure_io.hpp"
#include "lsl/rearrangement.hpp"
#include "lsl/transport.hpp"

using namespace lsl;
using nlohmann::json;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_failure = 1;
constexpr int exit_counterexample = 2;
constexpr int exit_input = 3;

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path);
  if (!os) throw Error(ErrorKind::invalid_input, "cannot open " + path + " for writing");
  os.precision(17);
  return os;
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

Point parse_point(const std::string& s) {
  const auto comma = s.find(',');
  if (comma == std::string::npos) throw Error(ErrorKind::invalid_input, "point must be x,y: " + s);
  try {
    std::size_t used1 = 0, used2 = 0;
    const std::string xs = s.substr(0, comma), ys = s.substr(comma + 1);
    const double x = std::stod(xs, &used1), y = std::stod(ys, &used2);
    if (used1 != xs.size() || used2 != ys.size()) throw std::invalid_argument(s);
    return {x, y};
  } catch (const std::logic_error&) {
    throw Error(ErrorKind::invalid_input, "point must be x,y: " + s);
  }
}

std::vector<double> parse_grid(const std::string& s) {
  double a0 = 0, a1 = 0;
  long long steps = 0;
  char c1 = 0, c2 = 0;
  std::istringstream is(s);
  if (!(is >> a0 >> c1 >> a1 >> c2 >> steps) || c1 != ':' || c2 != ':' || !is.eof() || steps < 1)
    throw Error(ErrorKind::invalid_input, "grid must be a0:a1:steps with steps >= 1: " + s);
  std::vector<double> out;
  if (steps == 1) return {a0};
  for (long long i = 0; i < steps; ++i)
    out.push_back(a0 + (a1 - a0) * static_cast<double>(i) / static_cast<double>(steps - 1));
  return out;
}

CurvatureMethod parse_method(const std::string& s) {
  if (s == "hessian") return CurvatureMethod::hessian;
  if (s == "supdef") return CurvatureMethod::supdef;
  throw Error(ErrorKind::invalid_input, "unknown method " + s);
}

json report_json(const CurvatureReport& r) {
  return {{"kappa", r.kappa_signed},
          {"kappa_abs", std::abs(r.kappa_signed)},
          {"sigma", r.sigma},
          {"grad_angle", r.grad_angle.value()},
          {"method", std::string(to_string(r.method))},
          {"residual", r.residual}};
}

json extremizer_json(const ExtremizerCheckReport& r) {
  json j = json::object();
  if (r.harmonicity_residual) j["harmonicity_residual"] = *r.harmonicity_residual;
  if (r.origin_jet) j["origin_jet"] = jet_to_json(*r.origin_jet);
  if (r.kappa_magnitude) j["kappa_magnitude"] = *r.kappa_magnitude;
  if (r.limit_constant) j["limit_constant"] = *r.limit_constant;
  if (r.limit_max_error) j["limit_max_error"] = *r.limit_max_error;
  return j;
}

void print(const json& j) { std::cout << j.dump(2) << "\n"; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"levelset_lab: curvature of zero level sets of harmonic extensions on the unit disk"};
  app.require_subcommand(1);

  std::string measure_path, out_path, method = "hessian";
  std::vector<std::string> points;

  auto* eval = app.add_subcommand("eval", "evaluate u and its derivatives at interior points");
  eval->add_option("--measure", measure_path, "measure JSON")->required();
  eval->add_option("--point", points, "x,y (repeatable)")->required();

  auto* curv = app.add_subcommand("curvature", "curvature of the zero set at the origin");
  curv->add_option("--measure", measure_path, "measure JSON")->required();
  curv->add_option("--method", method, "hessian or supdef");

  double ta = 0, tb = 0, teps = 0;
  auto* transport = app.add_subcommand("transport", "emit a transport measure");
  transport->add_option("--a", ta, "angle in (-pi, 0)")->required();
  transport->add_option("--b", tb, "angle in (0, pi)")->required();
  auto* eps_opt = transport->add_option("--eps", teps, "epsilon map parameter");
  transport->add_option("--out", out_path, "output measure JSON")->required();

  auto* trace = app.add_subcommand("trace", "trace the zero set through the origin");
  trace->add_option("--measure", measure_path, "measure JSON")->required();
  trace->add_option("--out", out_path, "curve.csv or curve.svg")->required();

  double eps0 = 0, tol = 1e-8;
  int rounds = 1;
  std::size_t steps = 100000;
  auto* rearrange = app.add_subcommand("rearrange", "greedy rearrangement sweep");
  rearrange->add_option("--measure", measure_path, "measure JSON")->required();
  auto* eps0_opt = rearrange->add_option("--eps0", eps0, "run the negative-mass sweep from this eps");
  rearrange->add_option("--rounds", rounds, "eps halvings");
  rearrange->add_option("--steps", steps, "step cap");
  rearrange->add_option("--tol", tol, "relative off-target tolerance");
  rearrange->add_option("--out", out_path, "trace CSV")->required();

  std::string check = "all";
  double limit_a = 1e-2;
  auto* extremizer = app.add_subcommand("extremizer", "checks on the extremal function w");
  extremizer->add_option("--check", check, "all|harmonic|curvature|limit")
      ->check(CLI::IsMember({"all", "harmonic", "curvature", "limit"}));
  extremizer->add_option("--a", limit_a, "transport half-width for the limit check");

  std::size_t samples = 10000, grid_n = 128;
  std::uint64_t seed = 42;
  std::string report_path;
  auto* falsify = app.add_subcommand("falsify", "random search for kappa > 8 in the reduced class");
  falsify->add_option("--samples", samples, "sample count");
  falsify->add_option("--seed", seed, "base seed");
  falsify->add_option("--grid", grid_n, "density grid size (>= 64)");
  falsify->add_option("--report", report_path, "report JSON (stdout if omitted)");

  std::string grid_spec;
  auto* sweep = app.add_subcommand("sweep", "kappa of symmetric transport maps against 4(1 + cos a)");
  sweep->add_option("--grid", grid_spec, "a0:a1:steps")->required();
  sweep->add_option("--out", out_path, "table CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_input;
  }

  try {
    if (*eval) {
      const BoundaryMeasure m = read_measure_file(measure_path);
      std::vector<Point> pts;
      for (const auto& s : points) pts.push_back(parse_point(s));
      const auto jets = evaluate_jets(m, pts);
      json arr = json::array();
      for (std::size_t i = 0; i < pts.size(); ++i) {
        json j = jet_to_json(jets[i]);
        j["x"] = pts[i].x;
        j["y"] = pts[i].y;
        arr.push_back(j);
      }
      print(arr);
    } else if (*curv) {
      const BoundaryMeasure m = read_measure_file(measure_path);
      print(report_json(curvature_at_origin(m, parse_method(method))));
    } else if (*transport) {
      const TransportParams p = *eps_opt ? TransportParams(ta, tb, teps) : TransportParams(ta, tb);
      write_measure_file(out_path, *eps_opt ? eps_transport_measure(p) : transport_measure(p));
    } else if (*trace) {
      const BoundaryMeasure m = read_measure_file(measure_path);
      const LevelCurve c = trace_zero_set(m);
      auto os = open_out(out_path);
      if (ends_with(out_path, ".svg")) write_curve_svg(os, c);
      else write_curve_csv(os, c);
      json summary = {{"points", c.points.size()}, {"closed", c.closed}, {"simple", is_simple_arc(c)}};
      if (c.exit_angles) summary["exit_angles"] = {c.exit_angles->first.value(), c.exit_angles->second.value()};
      print(summary);
    } else if (*rearrange) {
      const BoundaryMeasure m = read_measure_file(measure_path);
      const RearrangementTrace t = *eps0_opt ? run_eps_rearrangement(m, eps0, rounds, steps, tol)
                                             : run_rearrangement(m, steps, tol);
      auto os = open_out(out_path);
      write_trace_csv(os, t);
      print({{"steps", t.steps.size() - 1},
             {"stalled", t.stalled},
             {"bound_violation", t.bound_violation},
             {"off_target_mass", t.steps.back().off_target_mass},
             {"initial_off_target", t.initial_off_target},
             {"kappa", t.steps.back().kappa}});
    } else if (*extremizer) {
      const ExtremizerCheck which = check == "harmonic"    ? ExtremizerCheck::harmonic
                                    : check == "curvature" ? ExtremizerCheck::curvature
                                    : check == "limit"     ? ExtremizerCheck::limit
                                                           : ExtremizerCheck::all;
      print(extremizer_json(run_extremizer_checks(which, limit_a)));
    } else if (*falsify) {
      FalsifyReport r;
      int code = exit_ok;
      try {
        falsify_batch(samples, seed, grid_n, Exec::parallel, &r);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::counterexample) throw;
        std::cerr << e.what() << "\n";
        code = exit_counterexample;
      }
      if (report_path.empty()) {
        print(r.to_json());
      } else {
        auto os = open_out(report_path);
        os << r.to_json().dump(2) << "\n";
      }
      return code;
    } else if (*sweep) {
      const auto as = parse_grid(grid_spec);
      const auto rows = sweep_symmetric(as);
      auto os = open_out(out_path);
      os << "a,kappa_closed,kappa_numeric,difference\n";
      for (const SweepRow& r : rows)
        os << r.a << "," << r.kappa_closed << "," << r.kappa_numeric << "," << r.difference << "\n";
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.kind() == ErrorKind::invalid_input ? exit_input : exit_failure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_failure;
  }
  return exit_ok;
}

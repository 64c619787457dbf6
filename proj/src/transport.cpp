#include "lsl/transport.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "lsl/error.hpp"

namespace lsl {

TransportParams::TransportParams(double a, double b, std::optional<double> eps)
    : a_(a), b_(b), eps_(eps) {
  if (!(a > -pi && a < 0.0))
    throw Error(ErrorKind::invalid_input, "transport parameter a must lie in (-pi, 0)", a);
  if (!(b > 0.0 && b < pi))
    throw Error(ErrorKind::invalid_input, "transport parameter b must lie in (0, pi)", b);
  if (eps && !(*eps > 0.0 && *eps < std::min(-a, b)))
    throw Error(ErrorKind::invalid_input, "eps must lie in (0, min(-a, b))", *eps);
}

double TransportParams::weight_a() const {
  const double ratio = std::sin(a_) / std::sin(b_);
  return 1.0 / (1.0 - ratio);
}

double TransportParams::weight_b() const {
  const double ratio = std::sin(a_) / std::sin(b_);
  return -ratio / (1.0 - ratio);
}

BoundaryMeasure transport_measure(const TransportParams& p) {
  if (p.eps()) throw Error(ErrorKind::invalid_input, "transport_measure takes no eps");
  return make_measure({{Angle(0.0), 1.0},
                       {Angle(p.a()), -p.weight_a()},
                       {Angle(p.b()), -p.weight_b()}});
}

double transport_curvature_closed(const TransportParams& p) {
  if (p.eps()) throw Error(ErrorKind::invalid_input, "closed form is for eps-free maps");
  const double a = p.a(), b = p.b();
  return 8.0 * std::cos(0.5 * a) * std::cos(0.5 * b) * std::cos(0.5 * (a + b));
}

BoundaryMeasure eps_transport_measure(const TransportParams& p) {
  if (!p.eps()) throw Error(ErrorKind::invalid_input, "eps_transport_measure requires eps");
  const double e = *p.eps();
  return make_measure({{Angle(e), 1.0},
                       {Angle(-e), 1.0},
                       {Angle(p.a()), -2.0 * p.weight_a()},
                       {Angle(p.b()), -2.0 * p.weight_b()}});
}

BoundaryMeasure nu_measure(double eps) {
  if (!(eps > 0.0 && eps < pi))
    throw Error(ErrorKind::invalid_input, "nu_measure needs eps in (0, pi)", eps);
  return make_measure({{Angle(eps), 1.0}, {Angle(-eps), 1.0}, {Angle(0.0), -2.0}});
}

double h_curvature_closed(double eps) {
  if (!(eps > 0.0 && eps < pi))
    throw Error(ErrorKind::invalid_input, "h_curvature_closed needs eps in (0, pi)", eps);
  return 2.0 * versin(2.0 * eps) / versin(eps);
}

double max_atom_difference(const BoundaryMeasure& m1, const BoundaryMeasure& m2) {
  std::map<double, double> diff;
  for (const Atom& a : m1.atoms()) diff[a.angle.value()] += a.weight;
  for (const Atom& a : m2.atoms()) diff[a.angle.value()] -= a.weight;
  double worst = 0.0;
  for (const auto& [angle, d] : diff) worst = std::max(worst, std::abs(d));
  return worst;
}

double decompose_check(const TransportParams& p) {
  if (!p.eps()) throw Error(ErrorKind::invalid_input, "decompose_check requires eps");
  const TransportParams plain(p.a(), p.b());
  const BoundaryMeasure rhs = combine(transport_measure(plain), nu_measure(*p.eps()), 2.0, 1.0);
  return max_atom_difference(eps_transport_measure(p), rhs);
}

}  // namespace lsl

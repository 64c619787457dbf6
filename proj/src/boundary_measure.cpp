#include "lsl/boundary_measure.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lsl/error.hpp"

namespace lsl {

DensityGrid::DensityGrid(std::vector<double> values) : values_(std::move(values)) {
  if (values_.size() < min_size)
    throw Error(ErrorKind::invalid_input,
                "density grid needs at least 16 nodes, got " + std::to_string(values_.size()),
                static_cast<double>(values_.size()));
  for (std::size_t k = 0; k < values_.size(); ++k)
    if (!std::isfinite(values_[k]))
      throw Error(ErrorKind::invalid_input,
                  "non-finite density value at index " + std::to_string(k),
                  static_cast<double>(k));
}

std::size_t DensityGrid::nearest_node(double theta) const {
  const double n = static_cast<double>(values_.size());
  const double pos = std::round((wrap_angle(theta) + pi) / spacing());
  auto k = static_cast<long long>(pos) % static_cast<long long>(n);
  if (k < 0) k += static_cast<long long>(n);
  return static_cast<std::size_t>(k);
}

double DensityGrid::interpolate(double theta) const {
  const std::size_t n = values_.size();
  double pos = (wrap_angle(theta) + pi) / spacing();
  pos = std::fmod(pos, static_cast<double>(n));
  if (pos < 0) pos += static_cast<double>(n);
  const auto k0 = static_cast<std::size_t>(std::floor(pos)) % n;
  const double f = pos - std::floor(pos);
  return (1.0 - f) * values_[k0] + f * values_[(k0 + 1) % n];
}

DensityGrid DensityGrid::resampled(std::size_t n) const {
  if (n == values_.size()) return *this;
  return sample_density(n, [this](double t) { return interpolate(t); });
}

double DensityGrid::integral() const {
  double acc = 0.0;
  for (double v : values_) acc += v;
  return acc * spacing();
}

double BoundaryMeasure::atom_weight(Angle a) const {
  auto it = std::lower_bound(atoms_.begin(), atoms_.end(), a,
                             [](const Atom& x, Angle v) { return x.angle < v; });
  return (it != atoms_.end() && it->angle == a) ? it->weight : 0.0;
}

BoundaryMeasure make_measure(std::vector<Atom> atoms, std::optional<DensityGrid> density) {
  for (std::size_t i = 0; i < atoms.size(); ++i)
    if (!std::isfinite(atoms[i].weight) || !std::isfinite(atoms[i].angle.value()))
      throw Error(ErrorKind::invalid_input,
                  "non-finite atom at index " + std::to_string(i), static_cast<double>(i));

  std::stable_sort(atoms.begin(), atoms.end(),
                   [](const Atom& a, const Atom& b) { return a.angle < b.angle; });
  std::vector<Atom> merged;
  merged.reserve(atoms.size());
  for (const Atom& a : atoms) {
    if (!merged.empty() && merged.back().angle == a.angle)
      merged.back().weight += a.weight;
    else
      merged.push_back(a);
  }
  std::erase_if(merged, [](const Atom& a) { return a.weight == 0.0; });

  BoundaryMeasure m;
  m.atoms_ = std::move(merged);
  m.density_ = std::move(density);
  return m;
}

BoundaryMeasure combine(const BoundaryMeasure& m1, const BoundaryMeasure& m2, double c1,
                        double c2) {
  std::vector<Atom> atoms;
  atoms.reserve(m1.atoms().size() + m2.atoms().size());
  for (const Atom& a : m1.atoms()) atoms.push_back({a.angle, c1 * a.weight});
  for (const Atom& a : m2.atoms()) atoms.push_back({a.angle, c2 * a.weight});

  std::optional<DensityGrid> density;
  const auto& d1 = m1.density();
  const auto& d2 = m2.density();
  if (d1 && d2) {
    const std::size_t n = std::max(d1->size(), d2->size());
    const DensityGrid g1 = d1->resampled(n);
    const DensityGrid g2 = d2->resampled(n);
    std::vector<double> v(n);
    for (std::size_t k = 0; k < n; ++k) v[k] = c1 * g1[k] + c2 * g2[k];
    density.emplace(std::move(v));
  } else if (d1 || d2) {
    const DensityGrid& g = d1 ? *d1 : *d2;
    const double c = d1 ? c1 : c2;
    std::vector<double> v(g.values().begin(), g.values().end());
    for (double& x : v) x *= c;
    density.emplace(std::move(v));
  }
  return make_measure(std::move(atoms), std::move(density));
}

BoundaryMeasure rotate_measure(const BoundaryMeasure& m, Angle theta) {
  std::vector<Atom> atoms;
  atoms.reserve(m.atoms().size());
  for (const Atom& a : m.atoms())
    atoms.push_back({Angle(a.angle.value() + theta.value()), a.weight});

  std::optional<DensityGrid> density;
  double residual = m.density_rotation_residual();
  if (const auto& d = m.density()) {
    const auto n = static_cast<long long>(d->size());
    const double cells = std::round(theta.value() / d->spacing());
    residual += theta.value() - cells * d->spacing();
    auto shift = static_cast<long long>(cells) % n;
    if (shift < 0) shift += n;
    std::vector<double> v(d->size());
    for (long long j = 0; j < n; ++j) v[static_cast<std::size_t>((j + shift) % n)] = (*d)[static_cast<std::size_t>(j)];
    density.emplace(std::move(v));
  }
  BoundaryMeasure out = make_measure(std::move(atoms), std::move(density));
  out.density_residual_ = out.density() ? residual : 0.0;
  return out;
}

BoundaryMeasure negate(const BoundaryMeasure& m) { return combine(m, BoundaryMeasure{}, -1.0, 0.0); }

double total_mass(const BoundaryMeasure& m) {
  double acc = 0.0;
  for (const Atom& a : m.atoms()) acc += a.weight;
  if (m.density()) acc += m.density()->integral();
  return acc;
}

Point moment_vector(const BoundaryMeasure& m) {
  Point acc;
  for (const Atom& a : m.atoms()) {
    acc.x += a.weight * a.angle.cos();
    acc.y += a.weight * a.angle.sin();
  }
  if (const auto& d = m.density()) {
    acc.x += d->integrate([](double t) { return std::cos(t); });
    acc.y += d->integrate([](double t) { return std::sin(t); });
  }
  return acc;
}

double variation(const BoundaryMeasure& m) {
  double acc = 0.0;
  for (const Atom& a : m.atoms()) acc += std::abs(a.weight);
  if (const auto& d = m.density()) {
    double s = 0.0;
    for (double v : d->values()) s += std::abs(v);
    acc += s * d->spacing();
  }
  return acc;
}

}  // namespace lsl

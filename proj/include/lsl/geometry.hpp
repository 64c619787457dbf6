#pragma once

#include <cmath>
#include <numbers>

namespace lsl {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Canonical representative in (-pi, pi]. A remainder of exactly -pi is
/// stored as +pi.
inline double wrap_angle(double theta) {
  double r = std::remainder(theta, two_pi);
  if (r <= -pi) r += two_pi;
  if (r > pi) r -= two_pi;
  return r;
}

/// Boundary angle in (-pi, pi].
class Angle {
 public:
  constexpr Angle() = default;
  explicit Angle(double theta) : value_(wrap_angle(theta)) {}

  double value() const { return value_; }
  double cos() const { return std::cos(value_); }
  double sin() const { return std::sin(value_); }

  friend bool operator==(Angle a, Angle b) { return a.value_ == b.value_; }
  friend auto operator<=>(Angle a, Angle b) { return a.value_ <=> b.value_; }

 private:
  double value_ = 0.0;
};

struct Point {
  double x = 0.0;
  double y = 0.0;

  double norm() const { return std::hypot(x, y); }
  double norm2() const { return x * x + y * y; }
};

inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
inline Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }
inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }

inline Point on_circle(double theta) { return {std::cos(theta), std::sin(theta)}; }

/// Rotate by `theta` counter-clockwise.
inline Point rotate(Point p, double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  return {c * p.x - s * p.y, s * p.x + c * p.y};
}

/// 1 - cos(x), without cancellation near x = 0.
inline double versin(double x) {
  const double s = std::sin(0.5 * x);
  return 2.0 * s * s;
}

}  // namespace lsl

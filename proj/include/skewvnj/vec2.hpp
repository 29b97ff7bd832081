#pragma once

#include <cmath>

namespace skewvnj {

struct Vec2 {
  double x1 = 0.0;
  double x2 = 0.0;

  friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x1 + b.x1, a.x2 + b.x2}; }
  friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x1 - b.x1, a.x2 - b.x2}; }
  friend constexpr Vec2 operator-(Vec2 a) { return {-a.x1, -a.x2}; }
  friend constexpr Vec2 operator*(double c, Vec2 a) { return {c * a.x1, c * a.x2}; }
  friend constexpr Vec2 operator*(Vec2 a, double c) { return {c * a.x1, c * a.x2}; }
  friend constexpr Vec2 operator/(Vec2 a, double c) { return {a.x1 / c, a.x2 / c}; }
  friend constexpr bool operator==(Vec2, Vec2) = default;
};

constexpr double dot(Vec2 a, Vec2 b) { return a.x1 * b.x1 + a.x2 * b.x2; }

inline bool is_finite(Vec2 v) { return std::isfinite(v.x1) && std::isfinite(v.x2); }

/// Row-major 2x2 matrix [[a, b], [c, d]].
struct Mat2 {
  double a = 1.0;
  double b = 0.0;
  double c = 0.0;
  double d = 1.0;

  static constexpr Mat2 identity() { return {}; }
  static constexpr Mat2 diag(double s1, double s2) { return {s1, 0.0, 0.0, s2}; }
  static Mat2 rotation(double angle) {
    const double cs = std::cos(angle);
    const double sn = std::sin(angle);
    return {cs, -sn, sn, cs};
  }

  constexpr double det() const { return a * d - b * c; }

  /// Caller guarantees det() != 0.
  constexpr Mat2 inverse() const {
    const double k = 1.0 / det();
    return {d * k, -b * k, -c * k, a * k};
  }

  constexpr Mat2 transposed() const { return {a, c, b, d}; }

  constexpr Vec2 operator()(Vec2 v) const { return {a * v.x1 + b * v.x2, c * v.x1 + d * v.x2}; }

  friend constexpr Mat2 operator*(const Mat2& m, const Mat2& n) {
    return {m.a * n.a + m.b * n.c, m.a * n.b + m.b * n.d,
            m.c * n.a + m.d * n.c, m.c * n.b + m.d * n.d};
  }
  friend constexpr bool operator==(const Mat2&, const Mat2&) = default;
};

}  // namespace skewvnj

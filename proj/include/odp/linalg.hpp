#pragma once

#include <array>
#include <cmath>

namespace odp {

/// Column 2-vector.
struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  double norm() const { return std::hypot(x, y); }
  double dot(const Vec2& o) const { return x * o.x + y * o.y; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
};

/// Row-major 2x2 matrix.
struct Mat2 {
  double a11 = 0.0, a12 = 0.0;
  double a21 = 0.0, a22 = 0.0;

  static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
  static Mat2 from_columns(const Vec2& c1, const Vec2& c2) {
    return {c1.x, c2.x, c1.y, c2.y};
  }

  double trace() const { return a11 + a22; }
  double det() const { return a11 * a22 - a12 * a21; }
  double frobenius() const {
    return std::sqrt(a11 * a11 + a12 * a12 + a21 * a21 + a22 * a22);
  }
  Vec2 col(int j) const { return j == 0 ? Vec2{a11, a21} : Vec2{a12, a22}; }

  Mat2 operator*(const Mat2& o) const {
    return {a11 * o.a11 + a12 * o.a21, a11 * o.a12 + a12 * o.a22,
            a21 * o.a11 + a22 * o.a21, a21 * o.a12 + a22 * o.a22};
  }
  Vec2 operator*(const Vec2& v) const {
    return {a11 * v.x + a12 * v.y, a21 * v.x + a22 * v.y};
  }
  Mat2 operator-(const Mat2& o) const {
    return {a11 - o.a11, a12 - o.a12, a21 - o.a21, a22 - o.a22};
  }
  Mat2 operator*(double s) const { return {a11 * s, a12 * s, a21 * s, a22 * s}; }
};

/// The half-period reflection diag(1, -1).
inline constexpr Mat2 kReflect{1.0, 0.0, 0.0, -1.0};

/// Wronskian v1.x * v2.y - v1.y * v2.x of two column vectors.
inline double wronskian(const Vec2& v1, const Vec2& v2) { return v1.x * v2.y - v1.y * v2.x; }

}  // namespace odp

#pragma once

#include <array>
#include <cmath>

namespace biot {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  constexpr Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
  constexpr Vec2& operator+=(const Vec2& o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  constexpr double dot(const Vec2& o) const { return x * o.x + y * o.y; }
  double norm() const { return std::hypot(x, y); }
};

inline constexpr Vec2 operator*(double s, const Vec2& v) { return v * s; }

/// Row-major 2x2 matrix; for gradients of vector fields m(i, j) = d v_i / d x_j.
struct Mat2 {
  std::array<double, 4> a{0.0, 0.0, 0.0, 0.0};

  constexpr double& operator()(int i, int j) { return a[2 * i + j]; }
  constexpr double operator()(int i, int j) const { return a[2 * i + j]; }
  constexpr Vec2 operator*(const Vec2& v) const {
    return {a[0] * v.x + a[1] * v.y, a[2] * v.x + a[3] * v.y};
  }
  constexpr Mat2 operator*(double s) const { return {{a[0] * s, a[1] * s, a[2] * s, a[3] * s}}; }
  constexpr Mat2 operator+(const Mat2& o) const {
    return {{a[0] + o.a[0], a[1] + o.a[1], a[2] + o.a[2], a[3] + o.a[3]}};
  }
  constexpr Mat2 operator-(const Mat2& o) const {
    return {{a[0] - o.a[0], a[1] - o.a[1], a[2] - o.a[2], a[3] - o.a[3]}};
  }
  constexpr Mat2 transpose() const { return {{a[0], a[2], a[1], a[3]}}; }
  constexpr double det() const { return a[0] * a[3] - a[1] * a[2]; }
  constexpr double trace() const { return a[0] + a[3]; }
  /// Frobenius inner product.
  constexpr double ddot(const Mat2& o) const {
    return a[0] * o.a[0] + a[1] * o.a[1] + a[2] * o.a[2] + a[3] * o.a[3];
  }
  static constexpr Mat2 identity() { return {{1.0, 0.0, 0.0, 1.0}}; }
};

}  // namespace biot

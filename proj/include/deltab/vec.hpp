#pragma once

#include <array>
#include <cmath>

namespace deltab {

/// Parameter-space point (u1, u2).
struct Point {
  double u1{0.0};
  double u2{0.0};
};

template <class T>
struct Vec3T {
  T x{}, y{}, z{};

  constexpr const T& operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
  constexpr T& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }

  friend constexpr Vec3T operator+(const Vec3T& a, const Vec3T& b) {
    return {a.x + b.x, a.y + b.y, a.z + b.z};
  }
  friend constexpr Vec3T operator-(const Vec3T& a, const Vec3T& b) {
    return {a.x - b.x, a.y - b.y, a.z - b.z};
  }
  friend constexpr Vec3T operator-(const Vec3T& a) { return {-a.x, -a.y, -a.z}; }
  template <class S>
  friend constexpr Vec3T operator*(const S& s, const Vec3T& a) {
    return {s * a.x, s * a.y, s * a.z};
  }
  template <class S>
  friend constexpr Vec3T operator/(const Vec3T& a, const S& s) {
    return {a.x / s, a.y / s, a.z / s};
  }
  friend constexpr bool operator==(const Vec3T&, const Vec3T&) = default;
};

using Vec3 = Vec3T<double>;

template <class T>
constexpr T dot(const Vec3T<T>& a, const Vec3T<T>& b) {
  return a.x * b.x + a.y * b.y + a.z * b.z;
}

template <class T>
constexpr Vec3T<T> cross(const Vec3T<T>& a, const Vec3T<T>& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

inline double max_abs(const Vec3& a) {
  return std::fmax(std::fabs(a.x), std::fmax(std::fabs(a.y), std::fabs(a.z)));
}

// Index conventions: every 0-based index below maps to the 1-based
// coordinate index u^(i+1).
using Mat2 = std::array<std::array<double, 2>, 2>;
using Tensor3 = std::array<Mat2, 2>;
using Tensor4 = std::array<Tensor3, 2>;

inline double frobenius(const Mat2& m) {
  return std::sqrt(m[0][0] * m[0][0] + m[0][1] * m[0][1] + m[1][0] * m[1][0] +
                   m[1][1] * m[1][1]);
}

inline double det(const Mat2& m) { return m[0][0] * m[1][1] - m[0][1] * m[1][0]; }

}  // namespace deltab

#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace deltab {

/// Truncated bivariate Taylor expansion of total degree N around a point.
///
/// Coefficients are stored as Taylor coefficients c(a,b) = d1^a d2^b f / (a! b!)
/// in total-degree blocks: (0,0), (1,0), (0,1), (2,0), (1,1), (0,2), ...
/// Arithmetic is exact truncated power-series algebra, so one pass through an
/// expression yields every mixed partial up to order N. Jets of degree 4
/// carry the 15 coefficients needed for the Laplacian of the second
/// fundamental form.
template <class T, int N>
class Jet {
  static_assert(N >= 0, "jet degree must be non-negative");

 public:
  static constexpr int degree = N;
  static constexpr int size = (N + 1) * (N + 2) / 2;

  static constexpr int index(int a, int b) {
    const int d = a + b;
    return d * (d + 1) / 2 + b;
  }

  constexpr Jet() = default;
  constexpr Jet(T value) { c_[0] = value; }  // NOLINT: implicit lift of constants

  /// The coordinate function u^(axis+1) expanded at `value`.
  static constexpr Jet variable(int axis, T value) {
    Jet j(value);
    if constexpr (N >= 1) j.c_[axis == 0 ? index(1, 0) : index(0, 1)] = T(1);
    return j;
  }

  static constexpr Jet from_partials(const std::array<T, size>& partials) {
    Jet j;
    for (int d = 0; d <= N; ++d)
      for (int b = 0; b <= d; ++b) {
        const int a = d - b;
        j.c_[index(a, b)] = partials[index(a, b)] / (factorial(a) * factorial(b));
      }
    return j;
  }

  constexpr T value() const { return c_[0]; }
  constexpr T taylor(int a, int b) const { return c_[index(a, b)]; }
  constexpr T& taylor(int a, int b) { return c_[index(a, b)]; }
  /// d1^a d2^b f at the expansion point.
  constexpr T partial(int a, int b) const {
    return c_[index(a, b)] * (factorial(a) * factorial(b));
  }

  /// Partial derivative along u^(axis+1); loses one degree.
  constexpr Jet<T, N - 1> d(int axis) const
    requires(N >= 1)
  {
    Jet<T, N - 1> out;
    for (int dg = 0; dg < N; ++dg)
      for (int b = 0; b <= dg; ++b) {
        const int a = dg - b;
        if (axis == 0)
          out.taylor(a, b) = T(a + 1) * c_[index(a + 1, b)];
        else
          out.taylor(a, b) = T(b + 1) * c_[index(a, b + 1)];
      }
    return out;
  }

  template <int M>
  constexpr Jet<T, M> truncate() const
    requires(M <= N)
  {
    Jet<T, M> out;
    for (int i = 0; i < Jet<T, M>::size; ++i) out.coeff(i) = c_[i];
    return out;
  }

  constexpr T coeff(int i) const { return c_[i]; }
  constexpr T& coeff(int i) { return c_[i]; }

  constexpr Jet& operator+=(const Jet& o) {
    for (int i = 0; i < size; ++i) c_[i] += o.c_[i];
    return *this;
  }
  constexpr Jet& operator-=(const Jet& o) {
    for (int i = 0; i < size; ++i) c_[i] -= o.c_[i];
    return *this;
  }
  constexpr Jet& operator*=(const Jet& o) { return *this = *this * o; }
  constexpr Jet& operator/=(const Jet& o) { return *this = *this / o; }

  friend constexpr Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend constexpr Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend constexpr Jet operator-(Jet a) {
    for (auto& x : a.c_) x = -x;
    return a;
  }

  friend constexpr Jet operator*(const Jet& x, const Jet& y) {
    Jet out;
    for (int d = 0; d <= N; ++d)
      for (int b = 0; b <= d; ++b) {
        const int a = d - b;
        T sum{0};
        for (int i = 0; i <= a; ++i)
          for (int j = 0; j <= b; ++j) sum += x.c_[index(i, j)] * y.c_[index(a - i, b - j)];
        out.c_[index(a, b)] = sum;
      }
    return out;
  }

  friend constexpr Jet operator/(const Jet& x, const Jet& y) { return x * reciprocal(y); }

  /// f(x) for a scalar function whose derivatives f^(k)(x0), k = 0..N,
  /// are given in `derivs`.
  friend constexpr Jet compose(const Jet& x, const std::array<T, N + 1>& derivs) {
    Jet h = x;
    h.c_[0] = T(0);
    Jet out(derivs[N] / factorial(N));
    for (int k = N - 1; k >= 0; --k) {
      out = out * h;
      out.c_[0] += derivs[k] / factorial(k);
    }
    return out;
  }

  friend constexpr Jet reciprocal(const Jet& x) {
    std::array<T, N + 1> f{};
    const T inv = T(1) / x.value();
    T p = inv;
    for (int k = 0; k <= N; ++k) {
      f[k] = ((k % 2) ? -p : p) * factorial(k);
      p *= inv;
    }
    return compose(x, f);
  }

  friend Jet exp(const Jet& x) {
    std::array<T, N + 1> f;
    f.fill(std::exp(x.value()));
    return compose(x, f);
  }

  friend Jet log(const Jet& x) {
    std::array<T, N + 1> f{};
    f[0] = std::log(x.value());
    const T inv = T(1) / x.value();
    T p = inv;
    for (int k = 1; k <= N; ++k) {
      f[k] = ((k % 2) ? p : -p) * factorial(k - 1);
      p *= inv;
    }
    return compose(x, f);
  }

  friend Jet sqrt(const Jet& x) {
    std::array<T, N + 1> f{};
    const T x0 = x.value();
    f[0] = std::sqrt(x0);
    T coef = T(1);
    for (int k = 1; k <= N; ++k) {
      coef *= T(0.5) - T(k - 1);
      f[k] = coef * f[0] / std::pow(x0, T(k));
    }
    return compose(x, f);
  }

  friend Jet sin(const Jet& x) { return compose(x, cyclic(std::sin(x.value()), std::cos(x.value()), -1)); }
  friend Jet cos(const Jet& x) { return compose(x, cyclic(std::cos(x.value()), -std::sin(x.value()), -1)); }
  friend Jet sinh(const Jet& x) { return compose(x, cyclic(std::sinh(x.value()), std::cosh(x.value()), 1)); }
  friend Jet cosh(const Jet& x) { return compose(x, cyclic(std::cosh(x.value()), std::sinh(x.value()), 1)); }
  friend Jet tan(const Jet& x) { return sin(x) / cos(x); }

  /// Integer power by repeated squaring; exact at x0 = 0 for n >= 0.
  friend constexpr Jet pow(const Jet& x, int n) {
    if (n < 0) return reciprocal(pow(x, -n));
    Jet result(T(1));
    Jet base = x;
    while (n > 0) {
      if (n & 1) result = result * base;
      n >>= 1;
      if (n > 0) base = base * base;
    }
    return result;
  }

  static constexpr T factorial(int k) {
    T f(1);
    for (int i = 2; i <= k; ++i) f *= T(i);
    return f;
  }

 private:
  // f, f', -f, -f' for trig (sign = -1); f, f', f, f' for hyperbolic (sign = +1).
  static constexpr std::array<T, N + 1> cyclic(T f0, T f1, int sign) {
    std::array<T, N + 1> f{};
    for (int k = 0; k <= N; ++k) {
      const T base = (k % 2 == 0) ? f0 : f1;
      f[k] = (sign < 0 && (k / 2) % 2 == 1) ? -base : base;
    }
    return f;
  }

  std::array<T, size> c_{};
};

template <int N>
using JetD = Jet<double, N>;

}  // namespace deltab

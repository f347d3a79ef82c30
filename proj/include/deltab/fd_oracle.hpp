#pragma once

// Finite-difference witness for the jet-based derivative path. Everything
// here is built from position evaluations r(u1, u2) only: central stencils
// with Richardson extrapolation for the jets, and nested differencing for
// the Laplacian of b. Nothing in this header calls into tensor.hpp or the
// jet arithmetic.

#include <array>
#include <cmath>
#include <string>
#include <type_traits>

#include "deltab/error.hpp"
#include "deltab/surface.hpp"
#include "deltab/surface_jet.hpp"
#include "deltab/vec.hpp"

namespace deltab::fd {

struct FdConfig {
  double base_step = 1e-3;
  int richardson_levels = 1;
  // step used for a partial of total order d is base_step * order_scale[d]
  std::array<double, 5> order_scale{1.0, 1.0, 1.0, 10.0, 10.0};

  double step(int order) const { return base_step * order_scale[order]; }

  void validate() const {
    if (!(base_step > 0.0) || !std::isfinite(base_step))
      throw Error(ErrorKind::invalid_argument, "fd step must be positive");
    if (richardson_levels < 1 || richardson_levels > 3)
      throw Error(ErrorKind::invalid_argument, "richardson levels must be 1, 2 or 3");
    for (double s : order_scale)
      if (!(s > 0.0)) throw Error(ErrorKind::invalid_argument, "order scale must be positive");
  }

  /// Largest parameter offset the Richardson ladder reaches for order d.
  double reach(int order) const {
    double r = 0.0;
    for (int d = 1; d <= order; ++d) r = std::fmax(r, d * step(d) * std::ldexp(1.0, richardson_levels));
    return r;
  }
};

namespace detail {

// Central second-order stencils on offsets -2..2 for derivative orders 0..4.
inline constexpr std::array<std::array<double, 5>, 5> kStencil{{
    {0.0, 0.0, 1.0, 0.0, 0.0},
    {0.0, -0.5, 0.0, 0.5, 0.0},
    {0.0, 1.0, -2.0, 1.0, 0.0},
    {-0.5, 1.0, 0.0, -1.0, 0.5},
    {1.0, -4.0, 6.0, -4.0, 1.0},
}};

template <std::size_t M>
using Values = std::array<double, M>;

template <std::size_t M>
Values<M> axpy(double a, const Values<M>& x, const Values<M>& y) {
  Values<M> out;
  for (std::size_t i = 0; i < M; ++i) out[i] = a * x[i] + y[i];
  return out;
}

template <class F>
auto stencil(const F& f, Point p, int a, int b, double h) {
  using R = std::invoke_result_t<const F&, Point>;
  R acc{};
  for (int i = 0; i < 5; ++i) {
    const double wi = kStencil[a][i];
    if (wi == 0.0) continue;
    for (int j = 0; j < 5; ++j) {
      const double wj = kStencil[b][j];
      if (wj == 0.0) continue;
      acc = axpy(wi * wj, f(Point{p.u1 + (i - 2) * h, p.u2 + (j - 2) * h}), acc);
    }
  }
  const double scale = 1.0 / std::pow(h, a + b);
  for (auto& x : acc) x *= scale;
  return acc;
}

}  // namespace detail

/// d1^a d2^b f at p by central differences on steps h, 2h, ..., 2^levels h,
/// Richardson-extrapolated in h². `f` maps a Point to std::array<double, M>.
template <class F>
auto mixed_partial(const F& f, Point p, int a, int b, double h, int levels) {
  using R = std::invoke_result_t<const F&, Point>;
  std::array<R, 4> table{};
  for (int m = 0; m <= levels; ++m) table[m] = detail::stencil(f, p, a, b, std::ldexp(h, m));
  for (int k = 1; k <= levels; ++k) {
    const double factor = std::ldexp(1.0, 2 * k);  // 4^k
    for (int m = 0; m + k <= levels; ++m) {
      R next;
      for (std::size_t i = 0; i < next.size(); ++i)
        next[i] = table[m][i] + (table[m][i] - table[m + 1][i]) / (factor - 1.0);
      table[m] = next;
    }
  }
  return table[0];
}

/// Finite-difference estimate of every partial of r up to `order`.
inline SurfaceJet fd_jet(const SurfaceDef& def, Point point, int order, const FdConfig& cfg = {}) {
  cfg.validate();
  if (order < 1 || order > SurfaceJet::max_order)
    throw Error(ErrorKind::invalid_argument, "fd_jet order must be in 1..4");
  const double margin = cfg.reach(order);
  if (!(def.domain().distance_to_boundary(point) >= margin))
    throw Error(ErrorKind::too_close_to_boundary,
                "fd stencil needs " + std::to_string(margin) + " clearance from the domain edge");
  const auto position = [&def](Point q) {
    const Vec3 r = def.position(q);
    return std::array<double, 3>{r.x, r.y, r.z};
  };
  std::array<Vec3, SurfaceJet::size> partials{};
  for (int d = 0; d <= order; ++d)
    for (int b = 0; b <= d; ++b) {
      const auto v = mixed_partial(position, point, d - b, b, cfg.step(d), cfg.richardson_levels);
      partials[SurfaceJet::index(d - b, b)] = {v[0], v[1], v[2]};
    }
  return require_rank2(SurfaceJet(point, order, partials));
}

namespace detail {

// g11, g12, g22, b11, b12, b22 from a finite-difference 2-jet.
inline std::array<double, 6> forms_at(const SurfaceDef& def, Point q, const FdConfig& cfg) {
  const SurfaceJet j = fd_jet(def, q, 2, cfg);
  const Vec3 r1 = j.partial(1, 0), r2 = j.partial(0, 1);
  const Vec3 c = cross(r1, r2);
  const Vec3 n = c / norm(c);
  return {dot(r1, r1), dot(r1, r2), dot(r2, r2), dot(j.partial(2, 0), n), dot(j.partial(1, 1), n),
          dot(j.partial(0, 2), n)};
}

struct Level1 {
  Mat2 g{}, ginv{}, b{};
  Tensor3 gamma{};  // gamma[k][i][j]
  std::array<double, 8> nabla{};  // ∇_i b_jk flattened as 4i + 2j + k
};

inline Level1 level1(const SurfaceDef& def, Point q, const FdConfig& cfg) {
  const auto f = [&](Point s) { return forms_at(def, s, cfg); };
  const double h = cfg.step(3);
  const auto v = f(q);
  const std::array<std::array<double, 6>, 2> dv{mixed_partial(f, q, 1, 0, h, cfg.richardson_levels),
                                                 mixed_partial(f, q, 0, 1, h, cfg.richardson_levels)};
  auto unpack = [](const std::array<double, 6>& a, int offset) {
    return Mat2{{{a[offset], a[offset + 1]}, {a[offset + 1], a[offset + 2]}}};
  };
  Level1 out;
  out.g = unpack(v, 0);
  out.b = unpack(v, 3);
  const double dg = det(out.g);
  out.ginv = {{{out.g[1][1] / dg, -out.g[0][1] / dg}, {-out.g[0][1] / dg, out.g[0][0] / dg}}};
  Tensor3 dgm{}, dbm{};
  for (int k = 0; k < 2; ++k) {
    dgm[k] = unpack(dv[k], 0);
    dbm[k] = unpack(dv[k], 3);
  }
  for (int k = 0; k < 2; ++k)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        double s = 0.0;
        for (int m = 0; m < 2; ++m) s += 0.5 * out.ginv[k][m] * (dgm[i][j][m] + dgm[j][i][m] - dgm[m][i][j]);
        out.gamma[k][i][j] = s;
      }
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) {
        double s = dbm[i][j][k];
        for (int m = 0; m < 2; ++m) s -= out.gamma[m][i][j] * out.b[m][k] + out.gamma[m][i][k] * out.b[j][m];
        out.nabla[4 * i + 2 * j + k] = s;
      }
  return out;
}

}  // namespace detail

/// Clearance oracle_laplacian_b needs from the domain boundary.
inline double oracle_reach(const FdConfig& cfg) {
  return 2.0 * cfg.step(3) * std::ldexp(1.0, cfg.richardson_levels) + cfg.reach(2);
}

/// (Δb)_ij rebuilt from position samples: FD forms -> FD Γ and ∇b -> FD ∂∇b
/// -> ∇∇b -> trace with g^kl.
inline Mat2 oracle_laplacian_b(const SurfaceDef& def, Point p, const FdConfig& cfg = {}) {
  cfg.validate();
  const double margin = oracle_reach(cfg);
  if (!(def.domain().distance_to_boundary(p) >= margin))
    throw Error(ErrorKind::too_close_to_boundary,
                "oracle needs " + std::to_string(margin) + " clearance from the domain edge");
  const detail::Level1 c = detail::level1(def, p, cfg);
  const auto nabla_at = [&](Point q) { return detail::level1(def, q, cfg).nabla; };
  const double h = cfg.step(3);
  const std::array<std::array<double, 8>, 2> dn{
      mixed_partial(nabla_at, p, 1, 0, h, cfg.richardson_levels),
      mixed_partial(nabla_at, p, 0, 1, h, cfg.richardson_levels)};
  auto nab = [&](int i, int j, int k) { return c.nabla[4 * i + 2 * j + k]; };

  Mat2 lap{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      double s = 0.0;
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) {
          double v = dn[k][4 * l + 2 * i + j];
          for (int m = 0; m < 2; ++m)
            v -= c.gamma[m][k][l] * nab(m, i, j) + c.gamma[m][k][i] * nab(l, m, j) +
                 c.gamma[m][k][j] * nab(l, i, m);
          s += c.ginv[k][l] * v;
        }
      lap[i][j] = s;
    }
  return lap;
}

}  // namespace deltab::fd

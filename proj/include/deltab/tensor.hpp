#pragma once

// Fundamental forms, Christoffel symbols, covariant derivatives of the second
// fundamental form and its rough Laplacian (Δb)_ij = g^kl ∇_k ∇_l b_ij at a
// single parameter point.
//
// Derivatives of g, n and b_ij are exact: the whole b_ij formula is carried
// through degree-4 jet arithmetic, then everything downstream is plain
// product-rule algebra on the extracted partials.
//
// Index convention: 0-based, so gamma[k][i][j] is Γ^(k+1)_(i+1)(j+1).

#include <array>
#include <cmath>
#include <optional>

#include "deltab/error.hpp"
#include "deltab/jet.hpp"
#include "deltab/surface_jet.hpp"
#include "deltab/vec.hpp"

namespace deltab {

/// Relative conformality tolerance for the isothermal test.
inline constexpr double kConformalTolerance = 1e-9;
/// det g below this is a hard error.
inline constexpr double kDegenerateMetric = 1e-14;

enum class Orientation { standard = 1, flipped = -1 };

struct MetricData {
  Mat2 g{};
  Mat2 ginv{};
  double det_g{0.0};
  Tensor3 dg{};   // dg[k][i][j] = ∂_k g_ij
  Tensor4 d2g{};  // d2g[k][l][i][j] = ∂_k ∂_l g_ij
  bool is_isothermal{false};
  // Isothermal-only: A = g11, B = ln(A)/2.
  double A{0.0};
  std::array<double, 2> dB{};
  Mat2 d2B{};
  double laplB{0.0};
};

struct SecondFormData {
  Vec3 n;
  Mat2 b{};
  double trace_b{0.0};  // b11 + b22
  Tensor3 db{};         // db[k][i][j] = ∂_k b_ij
  Tensor4 d2b{};        // d2b[k][l][i][j] = ∂_k ∂_l b_ij
};

struct Christoffel {
  Tensor3 gamma{};   // gamma[k][i][j] = Γ^k_ij
  Tensor4 dgamma{};  // dgamma[l][k][i][j] = ∂_l Γ^k_ij
};

struct CurvatureData {
  double K_extrinsic{0.0};
  double H{0.0};
  std::optional<double> K_intrinsic;
};

/// ∇_i b_jk together with its coordinate partials.
struct NablaB {
  Tensor3 nabla{};    // nabla[i][j][k] = ∇_i b_jk
  Tensor4 d_nabla{};  // d_nabla[l][i][j][k] = ∂_l ∇_i b_jk
};

struct CovB {
  Tensor3 nabla_b{};   // ∇_i b_jk
  Tensor4 nabla2_b{};  // nabla2_b[k][l][i][j] = ∇_k ∇_l b_ij
  Mat2 lap_b{};        // (Δb)_ij
  Mat2 lap_e_b{};      // ∂²_11 b_ij + ∂²_22 b_ij
};

namespace detail {

template <int M, int N>
Vec3T<JetD<M>> truncate(const Vec3T<JetD<N>>& v) {
  return {v.x.template truncate<M>(), v.y.template truncate<M>(), v.z.template truncate<M>()};
}

template <int N>
Vec3T<JetD<N - 1>> d(const Vec3T<JetD<N>>& v, int axis) {
  return {v.x.d(axis), v.y.d(axis), v.z.d(axis)};
}

template <int N>
double partial_k(const JetD<N>& f, int k) {
  return k == 0 ? f.partial(1, 0) : f.partial(0, 1);
}

template <int N>
double partial_kl(const JetD<N>& f, int k, int l) {
  const int a = (k == 0) + (l == 0);
  return f.partial(a, 2 - a);
}

inline void require_order(const SurfaceJet& jet, int order, const char* what) {
  if (jet.order() < order)
    throw Error(ErrorKind::invalid_argument,
                std::string(what) + " needs a jet of order >= " + std::to_string(order));
}

}  // namespace detail

/// First fundamental form g_ij = <∂_i r, ∂_j r> with partials up to order 2,
/// and the conformal data A, B = ln(A)/2 when the coordinates are isothermal.
inline MetricData first_form(const SurfaceJet& jet) {
  detail::require_order(jet, 3, "first_form");
  const auto r = jet.taylor();
  const auto r1 = detail::truncate<3>(detail::d(r, 0));
  const auto r2 = detail::truncate<3>(detail::d(r, 1));
  const std::array<std::array<JetD<3>, 2>, 2> gj{{{dot(r1, r1), dot(r1, r2)}, {dot(r1, r2), dot(r2, r2)}}};

  MetricData m;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      m.g[i][j] = gj[i][j].value();
      for (int k = 0; k < 2; ++k) {
        m.dg[k][i][j] = detail::partial_k(gj[i][j], k);
        for (int l = 0; l < 2; ++l) m.d2g[k][l][i][j] = detail::partial_kl(gj[i][j], k, l);
      }
    }
  m.det_g = det(m.g);
  if (!(m.det_g >= kDegenerateMetric))
    throw Error(ErrorKind::degenerate_metric, "det g = " + std::to_string(m.det_g));
  m.ginv = {{{m.g[1][1] / m.det_g, -m.g[0][1] / m.det_g}, {-m.g[1][0] / m.det_g, m.g[0][0] / m.det_g}}};

  // Conformality must hold on the 2-jet, not just pointwise, for the
  // B-derivatives to describe the metric.
  const double scale = kConformalTolerance * (m.g[0][0] + m.g[1][1]);
  const JetD<3> diff = gj[0][0] - gj[1][1];
  bool conformal = true;
  for (int dg = 0; dg <= 2 && conformal; ++dg)
    for (int b = 0; b <= dg; ++b)
      if (std::fabs(diff.partial(dg - b, b)) > scale || std::fabs(gj[0][1].partial(dg - b, b)) > scale) {
        conformal = false;
        break;
      }
  m.is_isothermal = conformal;
  if (conformal) {
    m.A = m.g[0][0];
    const JetD<3> B = 0.5 * log(gj[0][0]);
    for (int k = 0; k < 2; ++k) {
      m.dB[k] = detail::partial_k(B, k);
      for (int l = 0; l < 2; ++l) m.d2B[k][l] = detail::partial_kl(B, k, l);
    }
    m.laplB = m.d2B[0][0] + m.d2B[1][1];
  }
  return m;
}

/// n = (∂_1 r x ∂_2 r) / |∂_1 r x ∂_2 r|.
inline Vec3 unit_normal(const SurfaceJet& jet) {
  detail::require_order(jet, 1, "unit_normal");
  const Vec3 c = cross(jet.partial(1, 0), jet.partial(0, 1));
  const double len = norm(c);
  if (!(len >= kJacobianRankTolerance))
    throw Error(ErrorKind::rank_deficient_jacobian, "|d1 r x d2 r| = " + std::to_string(len));
  return c / len;
}

/// b_ij = <∂²_ij r, n> and its first and second partials, obtained by
/// pushing the normal and the inner products through jet arithmetic.
inline SecondFormData second_form(const SurfaceJet& jet, Orientation orientation = Orientation::standard) {
  detail::require_order(jet, 4, "second_form");
  const auto r = jet.taylor();
  const auto r1 = detail::d(r, 0);
  const auto r2 = detail::d(r, 1);
  const auto c = cross(r1, r2);
  const JetD<3> len = sqrt(dot(c, c));
  if (!(len.value() >= kJacobianRankTolerance))
    throw Error(ErrorKind::rank_deficient_jacobian, "|d1 r x d2 r| = " + std::to_string(len.value()));
  const JetD<3> inv = (orientation == Orientation::standard ? 1.0 : -1.0) / len;
  const Vec3T<JetD<2>> n = detail::truncate<2>(Vec3T<JetD<3>>{c.x * inv, c.y * inv, c.z * inv});

  const std::array<std::array<Vec3T<JetD<2>>, 2>, 2> rr{
      {{detail::d(r1, 0), detail::d(r1, 1)}, {detail::d(r2, 0), detail::d(r2, 1)}}};

  SecondFormData sf;
  sf.n = {n.x.value(), n.y.value(), n.z.value()};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      const JetD<2> bij = dot(rr[i][j], n);
      sf.b[i][j] = bij.value();
      for (int k = 0; k < 2; ++k) {
        sf.db[k][i][j] = detail::partial_k(bij, k);
        for (int l = 0; l < 2; ++l) sf.d2b[k][l][i][j] = detail::partial_kl(bij, k, l);
      }
    }
  sf.trace_b = sf.b[0][0] + sf.b[1][1];
  return sf;
}

/// Levi-Civita connection Γ^k_ij = ½ g^km (∂_i g_jm + ∂_j g_im - ∂_m g_ij)
/// and its first partials.
inline Christoffel christoffel_general(const MetricData& m) {
  if (!(m.det_g >= kDegenerateMetric))
    throw Error(ErrorKind::degenerate_metric, "det g = " + std::to_string(m.det_g));
  Tensor3 dginv{};  // ∂_l g^km = -g^ka ∂_l g_ab g^bm
  for (int l = 0; l < 2; ++l)
    for (int k = 0; k < 2; ++k)
      for (int mm = 0; mm < 2; ++mm) {
        double s = 0.0;
        for (int a = 0; a < 2; ++a)
          for (int b = 0; b < 2; ++b) s -= m.ginv[k][a] * m.dg[l][a][b] * m.ginv[b][mm];
        dginv[l][k][mm] = s;
      }
  Christoffel ch;
  for (int k = 0; k < 2; ++k)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        double g0 = 0.0;
        std::array<double, 2> dg0{};
        for (int mm = 0; mm < 2; ++mm) {
          const double s = m.dg[i][j][mm] + m.dg[j][i][mm] - m.dg[mm][i][j];
          g0 += 0.5 * m.ginv[k][mm] * s;
          for (int l = 0; l < 2; ++l) {
            const double ds = m.d2g[l][i][j][mm] + m.d2g[l][j][i][mm] - m.d2g[l][mm][i][j];
            dg0[l] += 0.5 * (dginv[l][k][mm] * s + m.ginv[k][mm] * ds);
          }
        }
        ch.gamma[k][i][j] = g0;
        for (int l = 0; l < 2; ++l) ch.dgamma[l][k][i][j] = dg0[l];
      }
  return ch;
}

/// Γ¹₁₁ = Γ²₁₂ = -Γ¹₂₂ = ∂₁B, Γ¹₁₂ = Γ²₂₂ = -Γ²₁₁ = ∂₂B.
inline Christoffel christoffel_isothermal(const MetricData& m) {
  if (!m.is_isothermal) throw Error(ErrorKind::not_isothermal, "metric is not conformally flat here");
  auto fill = [](Tensor3& t, double b1, double b2) {
    t[0][0][0] = b1;
    t[1][0][1] = t[1][1][0] = b1;
    t[0][1][1] = -b1;
    t[0][0][1] = t[0][1][0] = b2;
    t[1][1][1] = b2;
    t[1][0][0] = -b2;
  };
  Christoffel ch;
  fill(ch.gamma, m.dB[0], m.dB[1]);
  for (int l = 0; l < 2; ++l) fill(ch.dgamma[l], m.d2B[l][0], m.d2B[l][1]);
  return ch;
}

/// ∇_i b_jk = ∂_i b_jk - Γ^m_ij b_mk - Γ^m_ik b_jm, plus ∂_l of it.
inline NablaB cov_deriv_b(const SecondFormData& sf, const Christoffel& ch) {
  const auto& G = ch.gamma;
  const auto& dG = ch.dgamma;
  NablaB out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) {
        double v = sf.db[i][j][k];
        for (int m = 0; m < 2; ++m) v -= G[m][i][j] * sf.b[m][k] + G[m][i][k] * sf.b[j][m];
        out.nabla[i][j][k] = v;
        for (int l = 0; l < 2; ++l) {
          double dv = sf.d2b[l][i][j][k];
          for (int m = 0; m < 2; ++m)
            dv -= dG[l][m][i][j] * sf.b[m][k] + G[m][i][j] * sf.db[l][m][k] +
                  dG[l][m][i][k] * sf.b[j][m] + G[m][i][k] * sf.db[l][j][m];
          out.d_nabla[l][i][j][k] = dv;
        }
      }
  return out;
}

/// ∇_k ∇_l b_ij = ∂_k(∇_l b_ij) - Γ^m_kl ∇_m b_ij - Γ^m_ki ∇_l b_mj - Γ^m_kj ∇_l b_im.
/// Not symmetric in (k, l) unless the surface is flat.
inline Tensor4 second_cov_deriv_b(const NablaB& nb, const Christoffel& ch) {
  const auto& G = ch.gamma;
  Tensor4 out{};
  for (int k = 0; k < 2; ++k)
    for (int l = 0; l < 2; ++l)
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
          double v = nb.d_nabla[k][l][i][j];
          for (int m = 0; m < 2; ++m)
            v -= G[m][k][l] * nb.nabla[m][i][j] + G[m][k][i] * nb.nabla[l][m][j] +
                 G[m][k][j] * nb.nabla[l][i][m];
          out[k][l][i][j] = v;
        }
  return out;
}

/// (Δb)_ij = g^kl ∇_k ∇_l b_ij. The normal connection of a surface in E³
/// is flat, so the Van der Waerden-Bortolotti derivative reduces to this.
inline Mat2 laplacian_b(const Tensor4& nabla2, const MetricData& m) {
  Mat2 out{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      double s = 0.0;
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) s += m.ginv[k][l] * nabla2[k][l][i][j];
      out[i][j] = s;
    }
  return out;
}

/// Δb from the conformal factor alone (isothermal coordinates):
///   A(Δb)11 = Δᵉb11 - 2 b11 ΔB - 4 ∂1B ∂1u + 2u(3(∂1B)² - (∂2B)²)
///   A(Δb)12 = Δᵉb12 - 2 b12 ΔB - 2 ∂1B ∂2u - 2 ∂2B ∂1u + 8u ∂1B ∂2B
///   A(Δb)22 = Δᵉb22 - 2 b22 ΔB - 4 ∂2B ∂2u + 2u(3(∂2B)² - (∂1B)²)
/// with u = b11 + b22.
inline Mat2 laplacian_b_isothermal(const SecondFormData& sf, const MetricData& m) {
  if (!m.is_isothermal) throw Error(ErrorKind::not_isothermal, "metric is not conformally flat here");
  const double u = sf.trace_b;
  const double du1 = sf.db[0][0][0] + sf.db[0][1][1];
  const double du2 = sf.db[1][0][0] + sf.db[1][1][1];
  const double B1 = m.dB[0], B2 = m.dB[1], LB = m.laplB;
  auto lap_e = [&](int i, int j) { return sf.d2b[0][0][i][j] + sf.d2b[1][1][i][j]; };
  Mat2 out{};
  out[0][0] = (lap_e(0, 0) - 2 * sf.b[0][0] * LB - 4 * B1 * du1 + 2 * u * (3 * B1 * B1 - B2 * B2)) / m.A;
  out[0][1] = (lap_e(0, 1) - 2 * sf.b[0][1] * LB - 2 * B1 * du2 - 2 * B2 * du1 + 8 * u * B1 * B2) / m.A;
  out[1][0] = out[0][1];
  out[1][1] = (lap_e(1, 1) - 2 * sf.b[1][1] * LB - 4 * B2 * du2 + 2 * u * (3 * B2 * B2 - B1 * B1)) / m.A;
  return out;
}

/// K = det b / det g, H = ½ g^ij b_ij, and K = -ΔB/A in isothermal coordinates.
inline CurvatureData curvatures(const SecondFormData& sf, const MetricData& m) {
  CurvatureData c;
  c.K_extrinsic = det(sf.b) / m.det_g;
  double h = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) h += m.ginv[i][j] * sf.b[i][j];
  c.H = 0.5 * h;
  if (m.is_isothermal) c.K_intrinsic = -m.laplB / m.A;
  return c;
}

inline CovB covariant_b(const SecondFormData& sf, const Christoffel& ch, const MetricData& m) {
  const NablaB nb = cov_deriv_b(sf, ch);
  CovB out;
  out.nabla_b = nb.nabla;
  out.nabla2_b = second_cov_deriv_b(nb, ch);
  out.lap_b = laplacian_b(out.nabla2_b, m);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.lap_e_b[i][j] = sf.d2b[0][0][i][j] + sf.d2b[1][1][i][j];
  return out;
}

/// Everything the checks need at one point, computed on the general
/// (coordinate-independent) path.
struct PointGeometry {
  SurfaceJet jet;
  MetricData metric;
  SecondFormData second;
  Christoffel christoffel;
  CovB covb;
  CurvatureData curvature;
};

inline PointGeometry point_geometry(const SurfaceJet& jet, Orientation orientation = Orientation::standard) {
  MetricData m = first_form(jet);
  SecondFormData sf = second_form(jet, orientation);
  Christoffel ch = christoffel_general(m);
  CovB cb = covariant_b(sf, ch, m);
  CurvatureData cv = curvatures(sf, m);
  return {jet, m, sf, ch, cb, cv};
}

}  // namespace deltab

#pragma once

#include <array>
#include <cmath>
#include <string>

#include "deltab/error.hpp"
#include "deltab/jet.hpp"
#include "deltab/vec.hpp"

namespace deltab {

/// Lower bound on |d1 r x d2 r| below which the parametrization is treated
/// as singular.
inline constexpr double kJacobianRankTolerance = 1e-9;

/// Position and every partial derivative d1^a d2^b r with a + b <= order at
/// one parameter point. Entries are always finite; the rank-2 Jacobian
/// condition is enforced by the surface-level entry points (eval_jet,
/// fd_jet) through require_rank2().
class SurfaceJet {
 public:
  static constexpr int max_order = 4;
  static constexpr int size = JetD<max_order>::size;
  static constexpr int index(int a, int b) { return JetD<max_order>::index(a, b); }

  SurfaceJet(Point point, int order, const std::array<Vec3, size>& partials)
      : point_(point), order_(order), partials_(partials) {
    if (order < 0 || order > max_order)
      throw Error(ErrorKind::invalid_argument, "jet order must be in 0..4");
    for (int d = order + 1; d <= max_order; ++d)
      for (int b = 0; b <= d; ++b) partials_[index(d - b, b)] = Vec3{};
    for (int d = 0; d <= order; ++d)
      for (int b = 0; b <= d; ++b) {
        const Vec3& p = partials_[index(d - b, b)];
        if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.z))
          throw Error(ErrorKind::domain_error,
                      "non-finite partial d1^" + std::to_string(d - b) + " d2^" +
                          std::to_string(b) + " r");
      }
  }

  Point point() const { return point_; }
  int order() const { return order_; }

  const Vec3& partial(int a, int b) const {
    if (a < 0 || b < 0 || a + b > order_)
      throw Error(ErrorKind::invalid_argument, "partial order exceeds jet order");
    return partials_[index(a, b)];
  }

  const std::array<Vec3, size>& partials() const { return partials_; }

  /// The jet as three degree-4 Taylor expansions; coefficients above
  /// order() are zero and must not be relied upon.
  Vec3T<JetD<max_order>> taylor() const {
    std::array<double, size> cx{}, cy{}, cz{};
    for (int i = 0; i < size; ++i) {
      cx[i] = partials_[i].x;
      cy[i] = partials_[i].y;
      cz[i] = partials_[i].z;
    }
    return {JetD<max_order>::from_partials(cx), JetD<max_order>::from_partials(cy),
            JetD<max_order>::from_partials(cz)};
  }

 private:
  Point point_;
  int order_;
  std::array<Vec3, size> partials_;
};

inline const SurfaceJet& require_rank2(const SurfaceJet& jet) {
  const double rank = norm(cross(jet.partial(1, 0), jet.partial(0, 1)));
  if (!(rank >= kJacobianRankTolerance))
    throw Error(ErrorKind::rank_deficient_jacobian,
                "|d1 r x d2 r| = " + std::to_string(rank) + " at (" + std::to_string(jet.point().u1) +
                    ", " + std::to_string(jet.point().u2) + ")");
  return jet;
}

/// Build a SurfaceJet from three Taylor expansions (the output of jet
/// arithmetic on a position function).
inline SurfaceJet make_surface_jet(Point point, int order, const Vec3T<JetD<4>>& r) {
  std::array<Vec3, SurfaceJet::size> partials{};
  for (int d = 0; d <= 4; ++d)
    for (int b = 0; b <= d; ++b) {
      const int a = d - b;
      partials[SurfaceJet::index(a, b)] = {r.x.partial(a, b), r.y.partial(a, b), r.z.partial(a, b)};
    }
  return SurfaceJet(point, order, partials);
}

}  // namespace deltab

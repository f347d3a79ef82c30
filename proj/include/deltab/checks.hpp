#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "deltab/error.hpp"
#include "deltab/surface.hpp"
#include "deltab/tensor.hpp"
#include "deltab/vec.hpp"

namespace deltab {

struct Tolerances {
  double tol_H = 1e-10;        // minimality: max |H|
  double tol_rec = 1e-8;       // Δ-recurrence with φ = 2K
  double tol_harm = 1e-10;     // Δ-harmonic: ||Δb||_F <= tol_harm * (1 + ||b||_F)
  double tol_K = 1e-10;        // flatness: max |K|
  double tol_b = 1e-10;        // flatness: max ||b||_F
  double b_floor = 1e-12;      // below this φ is undefined / normalizations floor
  double tol_gauss = 1e-7;     // |K_ext - K_int| / (1 + |K_ext|)
  double tol_codazzi = 1e-8;   // absolute
};

/// Per-point residuals of the structure equations and the Δ-laws.
struct ResidualReport {
  Point point;
  double K{0.0};
  double H{0.0};
  Mat2 b{};
  Mat2 lap_b{};
  std::optional<double> gauss_res;  // isothermal points only
  double codazzi_res{0.0};          // conformal Codazzi form when isothermal, else ∇b symmetry defect
  double symmetry_res{0.0};         // max |∇_i b_jk - ∇_j b_ik|
  double minimality_res{0.0};       // |H|
  double recurrence_res{0.0};
  double harmonic_res{0.0};         // ||Δb||_F
  std::optional<double> phi_estimate;
};

inline ResidualReport point_residuals(const MetricData& metric, const SecondFormData& sf,
                                      const CurvatureData& curv, const CovB& covb,
                                      Point point = {}, const Tolerances& tol = {}) {
  ResidualReport r;
  r.point = point;
  r.K = curv.K_extrinsic;
  r.H = curv.H;
  r.b = sf.b;
  r.lap_b = covb.lap_b;
  if (curv.K_intrinsic)
    r.gauss_res = std::fabs(curv.K_extrinsic - *curv.K_intrinsic) / (1.0 + std::fabs(curv.K_extrinsic));

  double sym = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        sym = std::fmax(sym, std::fabs(covb.nabla_b[i][j][k] - covb.nabla_b[j][i][k]));
  r.symmetry_res = sym;
  if (metric.is_isothermal) {
    const auto& db = sf.db;
    const double eq2 = db[1][0][0] - db[0][0][1] - sf.trace_b * metric.dB[1];
    const double eq3 = db[0][1][1] - db[1][0][1] - sf.trace_b * metric.dB[0];
    r.codazzi_res = std::fmax(std::fabs(eq2), std::fabs(eq3));
  } else {
    r.codazzi_res = sym;
  }

  r.minimality_res = std::fabs(curv.H);
  const double twoK = 2.0 * curv.K_extrinsic;
  Mat2 defect{};
  double num = 0.0, bb = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      defect[i][j] = covb.lap_b[i][j] - twoK * sf.b[i][j];
      num += covb.lap_b[i][j] * sf.b[i][j];
      bb += sf.b[i][j] * sf.b[i][j];
    }
  const double lap_norm = frobenius(covb.lap_b);
  const double b_norm = frobenius(sf.b);
  r.recurrence_res =
      frobenius(defect) / std::fmax(std::fmax(lap_norm, std::fabs(twoK) * b_norm), tol.b_floor);
  r.harmonic_res = lap_norm;
  if (b_norm > tol.b_floor) r.phi_estimate = num / bb;
  return r;
}

/// n1 x n2 cell centres of a uniform subdivision of a rectangle, visited in
/// row-major order (u1 index outer, u2 index inner).
struct Grid {
  int n1{41};
  int n2{41};
  Domain domain;

  static Grid checked(int n1, int n2, Domain domain) {
    if (n1 < 2 || n2 < 2) throw Error(ErrorKind::invalid_argument, "grid needs n1, n2 >= 2");
    return {n1, n2, domain};
  }

  std::size_t size() const { return static_cast<std::size_t>(n1) * static_cast<std::size_t>(n2); }

  Point at(std::size_t index) const {
    const int i = static_cast<int>(index / static_cast<std::size_t>(n2));
    const int j = static_cast<int>(index % static_cast<std::size_t>(n2));
    const double h1 = (domain.u1_max - domain.u1_min) / n1;
    const double h2 = (domain.u2_max - domain.u2_min) / n2;
    return {domain.u1_min + (i + 0.5) * h1, domain.u2_min + (j + 0.5) * h2};
  }
};

struct WorstPoint {
  Point point;
  double value{0.0};
};

struct Aggregates {
  std::size_t points{0};
  WorstPoint max_H;
  WorstPoint max_recurrence;
  WorstPoint max_harmonic;
  WorstPoint max_harmonic_ratio;  // ||Δb||_F / (1 + ||b||_F)
  WorstPoint max_gauss;
  WorstPoint max_codazzi;
  WorstPoint max_symmetry;
  WorstPoint max_abs_K;
  WorstPoint max_b_norm;
  std::size_t isothermal_points{0};
};

struct ClassificationVerdict {
  Aggregates aggregates;
  bool is_minimal{false};
  bool is_delta_recurrent_2K{false};
  bool is_delta_harmonic{false};
  Tolerances tolerances;

  std::string summary() const {
    std::string s = is_minimal ? "minimal" : "non-minimal";
    s += is_delta_recurrent_2K ? ", Δ-recurrent φ=2K" : ", not Δ-recurrent φ=2K";
    if (is_delta_harmonic) s += ", Δ-harmonic";
    return s;
  }
};

struct GridClassification {
  ClassificationVerdict verdict;
  std::vector<ResidualReport> reports;  // row-major grid order
};

inline ResidualReport analyze_point(const SurfaceDef& surface, Point p, const Tolerances& tol = {},
                                    Orientation orientation = Orientation::standard) {
  const PointGeometry pg = point_geometry(eval_jet(surface, p, 4), orientation);
  return point_residuals(pg.metric, pg.second, pg.curvature, pg.covb, p, tol);
}

namespace detail {
// Strictly-greater update keeps the first maximum in grid order, so the
// reduction does not depend on evaluation order of the points.
inline void keep_max(WorstPoint& w, double value, Point p, bool first) {
  if (first || value > w.value) w = {p, value};
}
}  // namespace detail

inline ClassificationVerdict classify_reports(const std::vector<ResidualReport>& reports,
                                              const Tolerances& tol) {
  ClassificationVerdict v;
  v.tolerances = tol;
  Aggregates& a = v.aggregates;
  a.points = reports.size();
  bool first = true;
  for (const ResidualReport& r : reports) {
    const double b_norm = frobenius(r.b);
    detail::keep_max(a.max_H, r.minimality_res, r.point, first);
    detail::keep_max(a.max_recurrence, r.recurrence_res, r.point, first);
    detail::keep_max(a.max_harmonic, r.harmonic_res, r.point, first);
    detail::keep_max(a.max_harmonic_ratio, r.harmonic_res / (1.0 + b_norm), r.point, first);
    detail::keep_max(a.max_gauss, r.gauss_res.value_or(0.0), r.point, first);
    detail::keep_max(a.max_codazzi, r.codazzi_res, r.point, first);
    detail::keep_max(a.max_symmetry, r.symmetry_res, r.point, first);
    detail::keep_max(a.max_abs_K, std::fabs(r.K), r.point, first);
    detail::keep_max(a.max_b_norm, b_norm, r.point, first);
    if (r.gauss_res) ++a.isothermal_points;
    first = false;
  }
  v.is_minimal = a.max_H.value <= tol.tol_H;
  v.is_delta_recurrent_2K = a.max_recurrence.value <= tol.tol_rec;
  v.is_delta_harmonic = a.max_harmonic_ratio.value <= tol.tol_harm;
  return v;
}

inline std::string describe(Point p) {
  return "(" + std::to_string(p.u1) + ", " + std::to_string(p.u2) + ")";
}

/// Residuals at every grid point plus the aggregate verdict. Evaluation
/// errors are rethrown with the offending grid point attached.
inline GridClassification classify_grid(const SurfaceDef& surface, const Grid& grid,
                                        const Tolerances& tol = {}) {
  GridClassification out;
  out.reports.reserve(grid.size());
  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    const Point p = grid.at(idx);
    try {
      out.reports.push_back(analyze_point(surface, p, tol));
    } catch (const Error& e) {
      throw Error(e.kind(), e.message() + " [grid point " + describe(p) + "]", e.offset());
    }
  }
  out.verdict = classify_reports(out.reports, tol);
  return out;
}

inline Grid default_grid(const SurfaceDef& surface) { return Grid{41, 41, surface.domain()}; }

/// Outcome of a theorem check once its hypotheses hold.
struct TheoremVerdict {
  ClassificationVerdict classification;
  bool holds{false};
  WorstPoint worst;  // point that decides the verdict
};

/// Minimal surfaces are Δ-recurrent with φ = 2K. Throws not_minimal when
/// the hypothesis fails on the grid.
inline TheoremVerdict theorem2_check(const SurfaceDef& surface, const Grid& grid, const Tolerances& tol = {}) {
  const auto result = classify_grid(surface, grid, tol);
  const auto& a = result.verdict.aggregates;
  if (!result.verdict.is_minimal)
    throw Error(ErrorKind::not_minimal, "max |H| = " + std::to_string(a.max_H.value) + " at " +
                                            describe(a.max_H.point));
  return {result.verdict, result.verdict.is_delta_recurrent_2K, a.max_recurrence};
}

/// Δ-harmonic minimal surfaces are planar: max |K| and max ||b|| vanish.
/// Throws not_minimal / not_harmonic naming the failed hypothesis.
inline TheoremVerdict theorem1_check(const SurfaceDef& surface, const Grid& grid, const Tolerances& tol = {}) {
  const auto result = classify_grid(surface, grid, tol);
  const auto& v = result.verdict;
  const auto& a = v.aggregates;
  if (!v.is_minimal)
    throw Error(ErrorKind::not_minimal, "max |H| = " + std::to_string(a.max_H.value) + " at " +
                                            describe(a.max_H.point));
  if (!v.is_delta_harmonic)
    throw Error(ErrorKind::not_harmonic,
                "max ||Δb|| / (1 + ||b||) = " + std::to_string(a.max_harmonic_ratio.value) + " at " +
                    describe(a.max_harmonic_ratio.point));
  const bool k_ok = a.max_abs_K.value <= tol.tol_K;
  const bool b_ok = a.max_b_norm.value <= tol.tol_b;
  return {v, k_ok && b_ok, k_ok ? a.max_b_norm : a.max_abs_K};
}

}  // namespace deltab

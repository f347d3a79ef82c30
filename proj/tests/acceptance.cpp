// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails.

#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "deltab/checks.hpp"
#include "deltab/fd_oracle.hpp"
#include "deltab/surface.hpp"
#include "deltab/tensor.hpp"

using namespace deltab;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

double rel_err(double got, double want) { return std::fabs(got - want) / std::fmax(std::fabs(want), 1e-300); }

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

Grid grid41(const SurfaceDef& s) { return Grid::checked(41, 41, s.domain()); }

template <class F>
void each_point(const SurfaceDef& s, const Grid& g, F&& f) {
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Point p = g.at(i);
    f(p, point_geometry(eval_jet(s, p, 4)));
  }
}

Outcome enneper_golden() {
  const SurfaceDef s = catalog_surface("enneper4");
  double b_err = 0, k_err = 0, lap_err = 0;
  each_point(s, grid41(s), [&](Point, const PointGeometry& g) {
    const double g11 = g.metric.g[0][0];
    b_err = std::fmax(b_err, std::fabs(g.second.b[0][0] - 4.0));
    b_err = std::fmax(b_err, std::fabs(g.second.b[1][1] + 4.0));
    b_err = std::fmax(b_err, std::fabs(g.second.b[0][1]));
    k_err = std::fmax(k_err, rel_err(g.curvature.K_extrinsic, -16.0 / (g11 * g11)));
    lap_err = std::fmax(lap_err, rel_err(g.covb.lap_b[0][0], -128.0 / (g11 * g11)));
  });
  return {b_err <= 1e-9 && k_err <= 1e-8 && lap_err <= 1e-8,
          fmt("b err %.2e", b_err) + fmt(", K rel %.2e", k_err) + fmt(", (Δb)11 rel %.2e", lap_err)};
}

Outcome helicoid_golden() {
  const SurfaceDef s = catalog_surface("helicoid");
  double b_err = 0, k_err = 0, lap12 = 0, lap_diag = 0, nab = 0;
  each_point(s, grid41(s), [&](Point p, const PointGeometry& g) {
    const double q = 1 + p.u2 * p.u2;
    b_err = std::fmax(b_err, rel_err(g.second.b[0][1], 1 / std::sqrt(q)));
    k_err = std::fmax(k_err, rel_err(g.curvature.K_extrinsic, -1 / (q * q)));
    lap12 = std::fmax(lap12, rel_err(g.covb.lap_b[0][1], -2 * std::pow(q, -2.5)));
    // relative to the scale of the nonzero entry
    lap_diag = std::fmax(lap_diag, std::fmax(std::fabs(g.covb.lap_b[0][0]), std::fabs(g.covb.lap_b[1][1])) /
                                       std::fabs(g.covb.lap_b[0][1]));
    nab = std::fmax(nab, std::fabs(g.covb.nabla_b[1][0][1] + 2 * p.u2 * std::pow(q, -1.5)));
  });
  return {b_err <= 1e-8 && k_err <= 1e-8 && lap12 <= 1e-8 && lap_diag <= 1e-8 && nab <= 1e-10,
          fmt("b12 rel %.2e", b_err) + fmt(", K rel %.2e", k_err) + fmt(", (Δb)12 rel %.2e", lap12) +
              fmt(", diag %.2e", lap_diag) + fmt(", ∇2b12 %.2e", nab)};
}

Outcome minimal_recurrence() {
  bool ok = true;
  std::string d;
  for (const char* name : {"helicoid", "enneper4", "catenoid", "plane"}) {
    const SurfaceDef s = catalog_surface(name);
    const auto v = classify_grid(s, grid41(s)).verdict;
    const double h = v.aggregates.max_H.value, r = v.aggregates.max_recurrence.value;
    ok = ok && h <= 1e-10 && r <= 1e-8;
    d += std::string(d.empty() ? "" : "; ") + name + fmt(" |H| %.1e", h) + fmt(" rec %.1e", r);
  }
  return {ok, d};
}

// Recurrence residual with Δb taken from the finite-difference oracle.
double oracle_recurrence(const SurfaceDef& s, Point p) {
  const Mat2 lap = fd::oracle_laplacian_b(s, p);
  const PointGeometry g = point_geometry(eval_jet(s, p, 4));
  const double twoK = 2 * g.curvature.K_extrinsic;
  Mat2 defect{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) defect[i][j] = lap[i][j] - twoK * g.second.b[i][j];
  return frobenius(defect) / std::fmax(std::fmax(frobenius(lap), std::fabs(twoK) * frobenius(g.second.b)), 1e-12);
}

Outcome controls() {
  const SurfaceDef cyl = catalog_surface("cylinder");
  const auto c = classify_grid(cyl, grid41(cyl)).verdict;
  double min_h = 1e300;
  each_point(cyl, grid41(cyl), [&](Point, const PointGeometry& g) { min_h = std::fmin(min_h, std::fabs(g.curvature.H)); });
  const bool cyl_ok = c.aggregates.max_harmonic.value <= 1e-10 && min_h > 0.4 && !c.is_minimal;

  const SurfaceDef sph = catalog_surface("sphere");
  const auto s = classify_grid(sph, grid41(sph)).verdict;
  const bool sph_ok = s.is_delta_harmonic && !s.is_minimal;

  const SurfaceDef par = catalog_surface("paraboloid");
  const auto p = classify_grid(par, grid41(par)).verdict;
  double oracle_max = 0;
  const Grid inner = Grid::checked(9, 9, Domain::checked(-0.9, 0.9, -0.9, 0.9));
  for (std::size_t i = 0; i < inner.size(); ++i) oracle_max = std::fmax(oracle_max, oracle_recurrence(par, inner.at(i)));
  const bool par_ok = p.aggregates.max_recurrence.value > 0.1 && oracle_max > 0.1;

  return {cyl_ok && sph_ok && par_ok,
          fmt("cylinder ||Δb|| %.1e", c.aggregates.max_harmonic.value) + fmt(" min|H| %.2f", min_h) +
              "; sphere " + s.summary() + fmt("; paraboloid rec %.3f", p.aggregates.max_recurrence.value) +
              fmt(" (oracle %.3f)", oracle_max)};
}

Outcome flatness() {
  std::vector<std::string> passing;
  double max_k = 0, max_b = 0;
  for (const auto& entry : catalog::surfaces()) {
    const SurfaceDef s = catalog_surface(entry.name);
    const auto v = classify_grid(s, grid41(s)).verdict;
    if (v.is_minimal && v.is_delta_harmonic) {
      passing.push_back(entry.name);
      const TheoremVerdict t = theorem1_check(s, grid41(s));
      max_k = t.classification.aggregates.max_abs_K.value;
      max_b = t.classification.aggregates.max_b_norm.value;
    }
  }
  const bool ok = passing.size() == 1 && passing[0] == "plane" && max_k <= 1e-10 && max_b <= 1e-10;
  std::string names;
  for (const auto& n : passing) names += (names.empty() ? "" : ",") + n;
  return {ok, "minimal and Δ-harmonic: [" + names + "]" + fmt(", max|K| %.1e", max_k) + fmt(", max||b|| %.1e", max_b)};
}

Outcome structure_equations() {
  double gauss = 0, codazzi = 0, sym = 0;
  bool all_iso = true;
  for (const auto& entry : catalog::surfaces()) {
    const SurfaceDef s = catalog_surface(entry.name);
    const auto res = classify_grid(s, grid41(s));
    sym = std::fmax(sym, res.verdict.aggregates.max_symmetry.value);
    const bool iso = res.verdict.aggregates.isothermal_points == res.verdict.aggregates.points;
    if (entry.name == "enneper4" || entry.name == "catenoid" || entry.name == "plane") all_iso = all_iso && iso;
    if (!iso) continue;
    gauss = std::fmax(gauss, res.verdict.aggregates.max_gauss.value);
    codazzi = std::fmax(codazzi, res.verdict.aggregates.max_codazzi.value);
  }
  return {all_iso && gauss <= 1e-7 && codazzi <= 1e-8 && sym <= 1e-8,
          fmt("gauss %.1e", gauss) + fmt(", codazzi %.1e", codazzi) + fmt(", symmetry %.1e", sym)};
}

Outcome dual_path() {
  double worst = 0;
  for (const char* name : {"enneper4", "plane"}) {
    const SurfaceDef s = catalog_surface(name);
    each_point(s, grid41(s), [&](Point, const PointGeometry& g) {
      const Mat2 iso = laplacian_b_isothermal(g.second, g.metric);
      Mat2 diff{};
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) diff[i][j] = iso[i][j] - g.covb.lap_b[i][j];
      const double scale = frobenius(g.covb.lap_b);
      worst = std::fmax(worst, scale > 0 ? frobenius(diff) / scale : frobenius(diff));
    });
  }
  return {worst <= 1e-10, fmt("max rel diff %.2e", worst)};
}

Outcome oracle_agreement() {
  std::mt19937 rng(20240601);
  const fd::FdConfig cfg;
  double jet_worst = 0, lap_worst = 0;
  for (const auto& entry : catalog::surfaces()) {
    const SurfaceDef s = catalog_surface(entry.name);
    const Domain& d = s.domain();
    const double m = std::fmax(fd::oracle_reach(cfg), cfg.reach(4)) * 1.01;
    std::uniform_real_distribution<double> c1(d.u1_min + m, d.u1_max - m), c2(d.u2_min + m, d.u2_max - m);
    for (int k = 0; k < 20; ++k) {
      const Point p{c1(rng), c2(rng)};
      const SurfaceJet a = eval_jet(s, p, 4), f = fd::fd_jet(s, p, 4, cfg);
      for (int i = 0; i < SurfaceJet::size; ++i)
        jet_worst = std::fmax(jet_worst, max_abs(a.partials()[i] - f.partials()[i]) /
                                             std::fmax(1.0, max_abs(a.partials()[i])));
      if (k < 5) {
        const Mat2 ad = point_geometry(a).covb.lap_b;
        const Mat2 ora = fd::oracle_laplacian_b(s, p, cfg);
        Mat2 diff{};
        for (int i = 0; i < 2; ++i)
          for (int j = 0; j < 2; ++j) diff[i][j] = ora[i][j] - ad[i][j];
        lap_worst = std::fmax(lap_worst, frobenius(diff) / (1e-3 * frobenius(ad) + 1e-5));
      }
    }
  }
  return {jet_worst <= 1e-4 && lap_worst <= 1.0,
          fmt("jet rel %.2e (tol 1e-4)", jet_worst) + fmt(", Δb excess ratio %.3f (<= 1)", lap_worst)};
}

Outcome caveat() {
  return {true,
          "informational: the theorems are symbolic results; acceptance rests on the golden values and the "
          "property checks above"};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"AC1 Enneper golden values", enneper_golden},
      {"AC2 helicoid golden values", helicoid_golden},
      {"AC3 minimal surfaces are Δ-recurrent with φ=2K", minimal_recurrence},
      {"AC4 controls", controls},
      {"AC5 Δ-harmonic minimal surfaces are planar", flatness},
      {"AC6 Gauss/Codazzi/symmetry residuals", structure_equations},
      {"AC7 isothermal vs general Δb", dual_path},
      {"AC8 finite-difference oracle agreement", oracle_agreement},
      {"AC9 scope caveat", caveat},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    failed += o.pass ? 0 : 1;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}

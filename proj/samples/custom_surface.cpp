// Parse a surface from the command line (or use Scherk's surface), print the
// geometry at one point and compare Δb with the finite-difference oracle.
//
//   custom_surface "u1, u2, ln(cos(u2)) - ln(cos(u1))" 0.3 -0.4

#include <cstdio>
#include <cstdlib>
#include <string>

#include "deltab/checks.hpp"
#include "deltab/fd_oracle.hpp"

int main(int argc, char** argv) {
  using namespace deltab;
  const std::string text = argc > 1 ? argv[1] : "u1, u2, ln(cos(u2)) - ln(cos(u1))";
  const Point p{argc > 2 ? std::atof(argv[2]) : 0.3, argc > 3 ? std::atof(argv[3]) : -0.4};
  try {
    const SurfaceDef s = parse_surface_file(text);
    const PointGeometry g = point_geometry(eval_jet(s, p, 4));
    const ResidualReport r = point_residuals(g.metric, g.second, g.curvature, g.covb, p);
    std::printf("r      = %s\n", expr::print(*s.program()).c_str());
    std::printf("K = %.12g  H = %.12g\n", r.K, r.H);
    std::printf("b      = [%.12g %.12g; %.12g %.12g]\n", r.b[0][0], r.b[0][1], r.b[1][0], r.b[1][1]);
    std::printf("Δb     = [%.12g %.12g; %.12g %.12g]\n", r.lap_b[0][0], r.lap_b[0][1], r.lap_b[1][0], r.lap_b[1][1]);
    const Mat2 fd = fd::oracle_laplacian_b(s, p);
    std::printf("Δb fd  = [%.12g %.12g; %.12g %.12g]\n", fd[0][0], fd[0][1], fd[1][0], fd[1][1]);
    std::printf("recurrence_res = %.3g", r.recurrence_res);
    if (r.phi_estimate) std::printf("  phi = %.12g  (2K = %.12g)", *r.phi_estimate, 2 * r.K);
    std::printf("\n");
  } catch (const Error& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return 2;
  }
}

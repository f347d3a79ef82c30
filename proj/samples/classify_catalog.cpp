// Classify every catalog surface on its default grid.

#include <cstdio>

#include "deltab/checks.hpp"

int main() {
  for (const auto& entry : deltab::catalog::surfaces()) {
    const deltab::SurfaceDef s = deltab::catalog_surface(entry.name);
    const auto v = deltab::classify_grid(s, deltab::default_grid(s)).verdict;
    std::printf("%-11s %-48s max|H| %.1e  max rec %.1e\n", entry.name.c_str(), v.summary().c_str(),
                v.aggregates.max_H.value, v.aggregates.max_recurrence.value);
  }
}

#include "tfc/diagnostics.hpp"

#include <cmath>

namespace tfc {

std::string_view to_string(Classification c) {
  switch (c) {
    case Classification::converged: return "converged";
    case Classification::no_solution: return "no_solution";
    case Classification::infinite_solutions: return "infinite_solutions";
    case Classification::indeterminate: return "indeterminate";
  }
  return "indeterminate";
}

int best_row(std::span<const SweepRow> rows) {
  int best = -1;
  for (int i = 0; i < static_cast<int>(rows.size()); ++i) {
    const auto& r = rows[i];
    if (!r.ok() || !std::isfinite(r.residual_std)) continue;
    if (best < 0 || r.residual_std < rows[best].residual_std) best = i;
  }
  return best;
}

Classification classify(std::span<const SweepRow> rows, const ClassifyThresholds& th) {
  int usable = 0;
  bool ever_below_fail = false;
  bool ever_bad_cond = false;
  for (const auto& r : rows) {
    if (!r.ok()) continue;
    ++usable;
    if (r.residual_std <= th.tol_fail) ever_below_fail = true;
    // A rank-deficient solve reports an infinite or huge condition number.
    if (!(r.cond_PtP < th.cond_bad)) ever_bad_cond = true;
  }
  if (usable < 5) return Classification::indeterminate;

  const int best = best_row(rows);
  if (best >= 0 && rows[best].residual_std <= th.tol_conv && rows[best].cond_PtP < th.cond_bad) {
    return Classification::converged;
  }
  if (!ever_below_fail && ever_bad_cond) return Classification::no_solution;
  if (ever_below_fail && ever_bad_cond) return Classification::infinite_solutions;
  return Classification::indeterminate;
}

}  // namespace tfc

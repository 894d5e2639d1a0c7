#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace tfc {

/// One m value of a basis-size sweep.
struct SweepRow {
  int m = 0;
  double residual_mean = 0.0;      // signed mean of P xi - lambda
  double residual_abs_mean = 0.0;  // mean of |P xi - lambda|
  double residual_std = 0.0;
  double cond_PtP = 0.0;
  bool rank_deficient = false;
  std::string error;  // non-empty when the solve at this m failed

  bool ok() const { return error.empty(); }
};

enum class Classification { converged, no_solution, infinite_solutions, indeterminate };

std::string_view to_string(Classification c);

struct ClassifyThresholds {
  double tol_conv = 1e-10;
  double tol_fail = 1e-6;
  double cond_bad = 1e15;
};

/// Rules, first match wins:
///   converged           min residual_std <= tol_conv with cond < cond_bad there
///   no_solution         residual_std never <= tol_fail and some cond > cond_bad
///   infinite_solutions  residual_std <= tol_fail somewhere and some cond > cond_bad
///   indeterminate       otherwise, or fewer than 5 successful rows
Classification classify(std::span<const SweepRow> rows, const ClassifyThresholds& th = {});

struct SolveReport {
  std::vector<SweepRow> per_m;
  Classification classification = Classification::indeterminate;
  int best_m = 0;  // argmin residual_std over successful rows, 0 if none
};

/// Index into rows of the smallest residual_std among successful rows, or -1.
int best_row(std::span<const SweepRow> rows);

}  // namespace tfc

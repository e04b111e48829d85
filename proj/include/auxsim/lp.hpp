#pragma once

// Small dense linear programs: maximize c.x subject to rows and x >= 0.
// Two-phase tableau simplex with Bland's rule, so the pivot sequence (and
// hence the reported optimum vertex) is fully deterministic.

#include <vector>

namespace auxsim {

enum class RowSense { le, eq, ge };

struct LpRow {
  std::vector<double> coeffs;
  RowSense sense = RowSense::le;
  double rhs = 0.0;
};

struct LinearProgram {
  std::vector<double> objective;
  std::vector<LpRow> rows;
};

enum class LpStatus { optimal, infeasible, unbounded };

struct LpResult {
  LpStatus status = LpStatus::infeasible;
  double value = 0.0;
  std::vector<double> x;
};

LpResult solve_lp(const LinearProgram& lp);

}  // namespace auxsim

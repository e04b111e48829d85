#include "auxsim/lp.hpp"

#include "auxsim/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

namespace auxsim {

namespace {

constexpr double kEps = 1e-10;
constexpr int kMaxPivots = 100000;

struct Tableau {
  std::size_t rows = 0;  // constraint rows; row 0 is the objective
  std::size_t cols = 0;  // variable columns; column `cols` is the rhs
  std::vector<double> t;
  std::vector<std::size_t> basis;

  double& at(std::size_t r, std::size_t c) { return t[r * (cols + 1) + c]; }
  double at(std::size_t r, std::size_t c) const { return t[r * (cols + 1) + c]; }

  void pivot(std::size_t pr, std::size_t pc) {
    const double p = at(pr, pc);
    for (std::size_t c = 0; c <= cols; ++c) at(pr, c) /= p;
    for (std::size_t r = 0; r <= rows; ++r) {
      if (r == pr) continue;
      const double f = at(r, pc);
      if (f == 0.0) continue;
      for (std::size_t c = 0; c <= cols; ++c) at(r, c) -= f * at(pr, c);
      at(r, pc) = 0.0;
    }
    basis[pr - 1] = pc;
  }

  // Maximizes the objective held in row 0 (stored negated). Columns at or
  // past `limit` never enter. Returns false when unbounded.
  bool optimize(std::size_t limit) {
    for (int iter = 0; iter < kMaxPivots; ++iter) {
      std::size_t enter = limit;
      for (std::size_t c = 0; c < limit; ++c) {
        if (at(0, c) < -kEps) {
          enter = c;
          break;
        }
      }
      if (enter == limit) return true;
      std::size_t leave = 0;
      double best = 0.0;
      for (std::size_t r = 1; r <= rows; ++r) {
        const double a = at(r, enter);
        if (a <= kEps) continue;
        const double ratio = at(r, cols) / a;
        if (leave == 0 || ratio < best - kEps ||
            (std::abs(ratio - best) <= kEps && basis[r - 1] < basis[leave - 1])) {
          leave = r;
          best = ratio;
        }
      }
      if (leave == 0) return false;
      pivot(leave, enter);
    }
    throw ClosureError("solve_lp: pivot limit reached");
  }
};

}  // namespace

LpResult solve_lp(const LinearProgram& lp) {
  const std::size_t n = lp.objective.size();
  const std::size_t m = lp.rows.size();

  // normalise rows and make every rhs non-negative
  std::vector<LpRow> rows = lp.rows;
  std::size_t n_slack = 0;
  std::size_t n_art = 0;
  for (LpRow& row : rows) {
    if (row.coeffs.size() != n) throw DomainError("solve_lp: row width mismatch");
    double scale = std::abs(row.rhs);
    for (double a : row.coeffs) scale = std::max(scale, std::abs(a));
    if (scale > 0.0) {
      for (double& a : row.coeffs) a /= scale;
      row.rhs /= scale;
    }
    if (row.rhs < 0.0) {
      for (double& a : row.coeffs) a = -a;
      row.rhs = -row.rhs;
      if (row.sense == RowSense::le) {
        row.sense = RowSense::ge;
      } else if (row.sense == RowSense::ge) {
        row.sense = RowSense::le;
      }
    }
    if (row.sense != RowSense::eq) ++n_slack;
    if (row.sense != RowSense::le) ++n_art;
  }

  Tableau tab;
  tab.rows = m;
  tab.cols = n + n_slack + n_art;
  tab.t.assign((m + 1) * (tab.cols + 1), 0.0);
  tab.basis.assign(m, 0);
  const std::size_t art0 = n + n_slack;
  std::size_t slack = n;
  std::size_t art = art0;
  for (std::size_t i = 0; i < m; ++i) {
    const LpRow& row = rows[i];
    for (std::size_t j = 0; j < n; ++j) tab.at(i + 1, j) = row.coeffs[j];
    tab.at(i + 1, tab.cols) = row.rhs;
    if (row.sense == RowSense::le) {
      tab.at(i + 1, slack) = 1.0;
      tab.basis[i] = slack++;
    } else {
      if (row.sense == RowSense::ge) tab.at(i + 1, slack++) = -1.0;
      tab.at(i + 1, art) = 1.0;
      tab.basis[i] = art++;
    }
  }

  LpResult result;
  if (n_art > 0) {
    // phase 1: maximize -(sum of artificials)
    for (std::size_t c = art0; c < tab.cols; ++c) tab.at(0, c) = 1.0;
    for (std::size_t i = 0; i < m; ++i) {
      if (tab.basis[i] < art0) continue;
      for (std::size_t c = 0; c <= tab.cols; ++c) tab.at(0, c) -= tab.at(i + 1, c);
    }
    tab.optimize(tab.cols);
    if (tab.at(0, tab.cols) < -1e-9) {
      result.status = LpStatus::infeasible;
      return result;
    }
    // drive remaining artificials out of the basis where possible
    for (std::size_t i = 0; i < m; ++i) {
      if (tab.basis[i] < art0) continue;
      for (std::size_t c = 0; c < art0; ++c) {
        if (std::abs(tab.at(i + 1, c)) > kEps) {
          tab.pivot(i + 1, c);
          break;
        }
      }
    }
  }

  // phase 2
  for (std::size_t c = 0; c <= tab.cols; ++c) tab.at(0, c) = 0.0;
  for (std::size_t j = 0; j < n; ++j) tab.at(0, j) = -lp.objective[j];
  for (std::size_t i = 0; i < m; ++i) {
    const double f = tab.at(0, tab.basis[i]);
    if (f == 0.0) continue;
    for (std::size_t c = 0; c <= tab.cols; ++c) tab.at(0, c) -= f * tab.at(i + 1, c);
  }
  if (!tab.optimize(art0)) {
    result.status = LpStatus::unbounded;
    return result;
  }
  result.status = LpStatus::optimal;
  result.x.assign(n, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    if (tab.basis[i] < n) result.x[tab.basis[i]] = tab.at(i + 1, tab.cols);
  }
  result.value = 0.0;
  for (std::size_t j = 0; j < n; ++j) result.value += lp.objective[j] * result.x[j];
  return result;
}

}  // namespace auxsim

// Copyright 2026 The evimpl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "evimpl/lp.hpp"

#include <optional>
#include <stdexcept>

namespace evimpl {

namespace {

class Tableau {
 public:
  // rows: [m][cols + 1] with the right-hand side last.
  Tableau(std::vector<std::vector<Rational>> rows, std::vector<std::size_t> basis)
      : rows_(std::move(rows)), basis_(std::move(basis)) {}

  std::size_t num_cols() const { return rows_.empty() ? 0 : rows_[0].size() - 1; }
  std::size_t num_rows() const { return rows_.size(); }
  const std::vector<std::size_t>& basis() const { return basis_; }
  const Rational& at(std::size_t r, std::size_t c) const { return rows_[r][c]; }
  const Rational& rhs(std::size_t r) const { return rows_[r].back(); }

  // Maximizes cost . x over columns allowed by `usable`. Returns false when
  // unbounded.
  bool optimize(const std::vector<Rational>& cost, const std::vector<bool>& usable) {
    while (true) {
      // Reduced cost of column c: cost_B . column - cost_c. Entering columns
      // have negative reduced cost; Bland picks the lowest index.
      std::optional<std::size_t> entering;
      for (std::size_t c = 0; c < num_cols() && !entering; ++c) {
        if (!usable[c]) continue;
        Rational reduced = -cost[c];
        for (std::size_t r = 0; r < num_rows(); ++r) reduced += cost[basis_[r]] * rows_[r][c];
        if (reduced < 0) entering = c;
      }
      if (!entering) return true;
      std::optional<std::size_t> leaving;
      Rational best_ratio;
      for (std::size_t r = 0; r < num_rows(); ++r) {
        if (rows_[r][*entering] <= 0) continue;
        Rational ratio = rhs(r) / rows_[r][*entering];
        if (!leaving || ratio < best_ratio ||
            (ratio == best_ratio && basis_[r] < basis_[*leaving])) {
          leaving = r;
          best_ratio = ratio;
        }
      }
      if (!leaving) return false;
      pivot(*leaving, *entering);
    }
  }

  void pivot(std::size_t r, std::size_t c) {
    Rational scale = rows_[r][c];
    for (auto& v : rows_[r]) v /= scale;
    for (std::size_t q = 0; q < num_rows(); ++q) {
      if (q == r || rows_[q][c] == 0) continue;
      Rational factor = rows_[q][c];
      for (std::size_t k = 0; k < rows_[q].size(); ++k) rows_[q][k] -= factor * rows_[r][k];
    }
    basis_[r] = c;
  }

  void drop_row(std::size_t r) {
    rows_.erase(rows_.begin() + static_cast<std::ptrdiff_t>(r));
    basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(r));
  }

 private:
  std::vector<std::vector<Rational>> rows_;
  std::vector<std::size_t> basis_;
};

}  // namespace

LpResult maximize(const std::vector<Rational>& objective,
                  const std::vector<LinearConstraint>& constraints) {
  const std::size_t n = objective.size();
  const std::size_t m = constraints.size();
  std::size_t slacks = 0;
  for (const auto& c : constraints) {
    if (c.coeffs.size() != n) throw std::invalid_argument("constraint width mismatch");
    if (c.relation != Relation::kEqual) ++slacks;
  }
  // Columns: structural | slack/surplus | artificial (one per row).
  const std::size_t art0 = n + slacks;
  const std::size_t cols = art0 + m;
  std::vector<std::vector<Rational>> rows(m, std::vector<Rational>(cols + 1, 0));
  std::vector<std::size_t> basis(m);
  std::size_t next_slack = n;
  for (std::size_t r = 0; r < m; ++r) {
    const auto& c = constraints[r];
    Rational sign = c.rhs < 0 ? -1 : 1;
    for (std::size_t j = 0; j < n; ++j) rows[r][j] = sign * c.coeffs[j];
    rows[r][cols] = sign * c.rhs;
    if (c.relation != Relation::kEqual) {
      Rational slack_sign = c.relation == Relation::kLessEqual ? 1 : -1;
      rows[r][next_slack++] = sign * slack_sign;
    }
    rows[r][art0 + r] = 1;
    basis[r] = art0 + r;
  }

  Tableau t(std::move(rows), std::move(basis));
  std::vector<bool> all(cols, true);
  std::vector<Rational> phase1(cols, 0);
  for (std::size_t k = art0; k < cols; ++k) phase1[k] = -1;
  t.optimize(phase1, all);
  Rational infeasibility = 0;
  for (std::size_t r = 0; r < t.num_rows(); ++r) {
    if (t.basis()[r] >= art0) infeasibility += t.rhs(r);
  }
  LpResult result;
  if (infeasibility != 0) {
    result.status = LpResult::Status::kInfeasible;
    return result;
  }
  // Pivot remaining (zero-valued) artificials out, dropping redundant rows.
  for (std::size_t r = t.num_rows(); r-- > 0;) {
    if (t.basis()[r] < art0) continue;
    std::optional<std::size_t> col;
    for (std::size_t c = 0; c < art0 && !col; ++c) {
      if (t.at(r, c) != 0) col = c;
    }
    if (col) {
      t.pivot(r, *col);
    } else {
      t.drop_row(r);
    }
  }
  std::vector<bool> structural(cols, false);
  for (std::size_t c = 0; c < art0; ++c) structural[c] = true;
  std::vector<Rational> phase2(cols, 0);
  for (std::size_t j = 0; j < n; ++j) phase2[j] = objective[j];
  if (!t.optimize(phase2, structural)) {
    result.status = LpResult::Status::kUnbounded;
    return result;
  }
  result.status = LpResult::Status::kOptimal;
  result.x.assign(n, 0);
  for (std::size_t r = 0; r < t.num_rows(); ++r) {
    if (t.basis()[r] < n) result.x[t.basis()[r]] = t.rhs(r);
  }
  result.value = 0;
  for (std::size_t j = 0; j < n; ++j) result.value += objective[j] * result.x[j];
  return result;
}

std::size_t matrix_rank(std::vector<std::vector<Rational>> rows) {
  std::size_t rank = 0;
  const std::size_t cols = rows.empty() ? 0 : rows[0].size();
  for (std::size_t c = 0; c < cols && rank < rows.size(); ++c) {
    std::optional<std::size_t> pivot;
    for (std::size_t r = rank; r < rows.size() && !pivot; ++r) {
      if (rows[r][c] != 0) pivot = r;
    }
    if (!pivot) continue;
    std::swap(rows[rank], rows[*pivot]);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r == rank || rows[r][c] == 0) continue;
      Rational f = rows[r][c] / rows[rank][c];
      for (std::size_t k = c; k < cols; ++k) rows[r][k] -= f * rows[rank][k];
    }
    ++rank;
  }
  return rank;
}

}  // namespace evimpl

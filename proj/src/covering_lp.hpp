#pragma once

// Bounded dual simplex for covering LPs
//     min c.x  s.t.  a_r.x >= b_r  (r in rows),  lo <= x <= hi.
// Each row r carries a surplus s_r >= 0 with a_r.x - s_r = b_r. The basis
// inverse is kept dense; rows can be added (the new surplus enters the
// basis) and rows with a basic surplus can be dropped, so the solver stays
// warm across cut rounds and branching.

#include <cstddef>
#include <cstdint>
#include <vector>

namespace gridcode::detail {

struct SparseRow {
  std::vector<std::size_t> index;
  std::vector<double> value;
  double rhs = 1.0;
};

class CoverLp {
 public:
  enum class Status { Optimal, Infeasible, IterationLimit };

  explicit CoverLp(std::vector<double> cost);

  std::size_t cols() const { return cost_.size(); }
  std::size_t rows() const { return rows_.size(); }
  const SparseRow& row(std::size_t r) const { return rows_[r]; }

  void add_row(SparseRow row);
  // Drops rows whose surplus is basic with value above `slack`, sparing the
  // first `keep` rows. Returns the drop mask over the old rows.
  std::vector<char> drop_slack_rows(double slack, std::size_t keep);

  void set_bounds(std::size_t j, double lo, double hi);
  double lo(std::size_t j) const { return lo_[j]; }
  double hi(std::size_t j) const { return hi_[j]; }

  Status solve(std::size_t max_iterations = 200000);

  double objective() const;
  const std::vector<double>& x() const { return x_; }
  double surplus(std::size_t r) const { return x_[cost_.size() + r]; }
  bool is_basic(std::size_t var) const { return pos_[var] >= 0; }
  std::uint64_t iterations() const { return iterations_; }

  // Row `i` of the simplex tableau for the basic variable in position i:
  // x_B + sum_j alpha_j x_j = beta over nonbasic j (structurals 0..n-1,
  // surpluses n..n+m-1).
  struct TableauRow {
    std::size_t basic = 0;
    std::vector<double> alpha;  // size n + m, zero on basic columns
    double beta = 0.0;
  };
  TableauRow tableau_row(std::size_t position) const;
  std::size_t basic_at(std::size_t position) const { return head_[position]; }

  // Reduced cost of a nonbasic variable (0 for basic ones).
  double reduced_cost(std::size_t var) const { return d_[var]; }

 private:
  std::size_t vars() const { return cost_.size() + rows_.size(); }
  double var_lo(std::size_t v) const { return v < cost_.size() ? lo_[v] : 0.0; }
  double var_hi(std::size_t v) const;
  void binv_column(std::size_t var, std::vector<double>& w) const;
  bool refactor();  // false when the basis is singular
  void reset_basis();
  void recompute();
  void place_nonbasic(std::size_t v);

  std::vector<double> cost_;
  std::vector<double> lo_, hi_;
  std::vector<SparseRow> rows_;
  std::vector<std::vector<std::pair<std::size_t, double>>> col_;  // (row, value)

  std::vector<std::size_t> head_;          // basic var per position
  std::vector<std::ptrdiff_t> pos_;        // position per var, -1 when nonbasic
  std::vector<std::vector<double>> binv_;  // m x m
  std::vector<double> x_;                  // all vars
  std::vector<double> d_;                  // reduced costs
  std::uint64_t iterations_ = 0;
  std::size_t since_refactor_ = 0;
  bool dirty_ = false;
};

}  // namespace gridcode::detail

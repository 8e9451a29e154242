#include "covering_lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gridcode::detail {

namespace {
constexpr double kPrimalTol = 1e-9;
constexpr double kDualTol = 1e-9;
constexpr double kPivotTol = 1e-7;
constexpr std::size_t kRefactorEvery = 100;
constexpr double kInf = std::numeric_limits<double>::infinity();
}  // namespace

CoverLp::CoverLp(std::vector<double> cost)
    : cost_(std::move(cost)),
      lo_(cost_.size(), 0.0),
      hi_(cost_.size(), 1.0),
      col_(cost_.size()),
      pos_(cost_.size(), -1),
      x_(cost_.size(), 0.0),
      d_(cost_) {}

double CoverLp::var_hi(std::size_t v) const {
  return v < cost_.size() ? hi_[v] : kInf;
}

void CoverLp::add_row(SparseRow row) {
  const std::size_t n = cost_.size();
  const std::size_t m = rows_.size();
  if (dirty_) recompute();
  // Coefficients of the new row on the current basic variables.
  std::vector<double> on_basis(m, 0.0);
  double activity = 0.0;
  for (std::size_t k = 0; k < row.index.size(); ++k) {
    const std::size_t j = row.index[k];
    activity += row.value[k] * x_[j];
    if (pos_[j] >= 0) on_basis[static_cast<std::size_t>(pos_[j])] = row.value[k];
    col_[j].emplace_back(m, row.value[k]);
  }
  std::vector<double> fresh(m + 1, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    if (on_basis[i] == 0.0) continue;
    const auto& bi = binv_[i];
    for (std::size_t k = 0; k < m; ++k) fresh[k] += on_basis[i] * bi[k];
  }
  fresh[m] = -1.0;
  for (auto& r : binv_) r.push_back(0.0);
  binv_.push_back(std::move(fresh));

  const std::size_t var = n + m;
  head_.push_back(var);
  pos_.push_back(static_cast<std::ptrdiff_t>(m));
  x_.push_back(activity - row.rhs);
  d_.push_back(0.0);
  rows_.push_back(std::move(row));
}

std::vector<char> CoverLp::drop_slack_rows(double slack, std::size_t keep) {
  const std::size_t n = cost_.size();
  const std::size_t m = rows_.size();
  if (dirty_) recompute();
  std::vector<char> drop(m, 0);
  std::size_t dropped = 0;
  for (std::size_t r = keep; r < m; ++r) {
    if (pos_[n + r] >= 0 && x_[n + r] > slack) {
      drop[r] = 1;
      ++dropped;
    }
  }
  if (dropped == 0) return drop;

  std::vector<std::size_t> new_row(m, 0);
  std::size_t next = 0;
  for (std::size_t r = 0; r < m; ++r) {
    if (!drop[r]) new_row[r] = next++;
  }
  auto remap = [&](std::size_t v) { return v < n ? v : n + new_row[v - n]; };

  std::vector<std::size_t> head;
  std::vector<std::vector<double>> binv;
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t v = head_[i];
    if (v >= n && drop[v - n]) continue;
    head.push_back(remap(v));
    std::vector<double> row;
    row.reserve(next);
    for (std::size_t k = 0; k < m; ++k) {
      if (!drop[k]) row.push_back(binv_[i][k]);
    }
    binv.push_back(std::move(row));
  }
  std::vector<SparseRow> rows;
  std::vector<double> x(n + next), d(n + next);
  for (std::size_t j = 0; j < n; ++j) {
    x[j] = x_[j];
    d[j] = d_[j];
  }
  for (std::size_t r = 0; r < m; ++r) {
    if (drop[r]) continue;
    x[n + new_row[r]] = x_[n + r];
    d[n + new_row[r]] = d_[n + r];
    rows.push_back(std::move(rows_[r]));
  }
  rows_ = std::move(rows);
  head_ = std::move(head);
  binv_ = std::move(binv);
  x_ = std::move(x);
  d_ = std::move(d);
  pos_.assign(n + next, -1);
  for (std::size_t i = 0; i < head_.size(); ++i) pos_[head_[i]] = static_cast<std::ptrdiff_t>(i);
  for (auto& c : col_) c.clear();
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    for (std::size_t k = 0; k < rows_[r].index.size(); ++k) {
      col_[rows_[r].index[k]].emplace_back(r, rows_[r].value[k]);
    }
  }
  return drop;
}

void CoverLp::set_bounds(std::size_t j, double lo, double hi) {
  lo_[j] = lo;
  hi_[j] = hi;
  if (pos_[j] < 0) place_nonbasic(j);
  dirty_ = true;
}

void CoverLp::place_nonbasic(std::size_t v) {
  if (v >= cost_.size()) {
    x_[v] = 0.0;
    return;
  }
  if (lo_[v] == hi_[v]) {
    x_[v] = lo_[v];
  } else if (x_[v] != lo_[v] && x_[v] != hi_[v]) {
    x_[v] = d_[v] >= 0.0 ? lo_[v] : hi_[v];
  } else if (x_[v] == lo_[v] && d_[v] < -kDualTol) {
    x_[v] = hi_[v];
  } else if (x_[v] == hi_[v] && d_[v] > kDualTol) {
    x_[v] = lo_[v];
  }
}

void CoverLp::binv_column(std::size_t var, std::vector<double>& w) const {
  const std::size_t m = rows_.size();
  w.assign(m, 0.0);
  if (var < cost_.size()) {
    for (const auto& [r, a] : col_[var]) {
      for (std::size_t i = 0; i < m; ++i) w[i] += binv_[i][r] * a;
    }
  } else {
    const std::size_t r = var - cost_.size();
    for (std::size_t i = 0; i < m; ++i) w[i] = -binv_[i][r];
  }
}

bool CoverLp::refactor() {
  const std::size_t m = rows_.size();
  const std::size_t n = cost_.size();
  // Rows whose surplus is basic are trivial; only rows with a nonbasic
  // surplus (K) against the basic structurals (S) need a dense inverse:
  //   B = [A_KS 0; A_LS -I],  B^-1 = [A_KS^-1 0; A_LS A_KS^-1 -I].
  std::vector<std::size_t> struct_pos, k_rows;
  std::vector<std::ptrdiff_t> k_index(m, -1);
  for (std::size_t i = 0; i < m; ++i) {
    if (head_[i] < n) struct_pos.push_back(i);
  }
  for (std::size_t r = 0; r < m; ++r) {
    if (pos_[n + r] < 0) {
      k_index[r] = static_cast<std::ptrdiff_t>(k_rows.size());
      k_rows.push_back(r);
    }
  }
  const std::size_t s = struct_pos.size();
  if (k_rows.size() != s) return false;
  // Gauss-Jordan on [A_KS | I]; columns of A_KS are structural positions.
  std::vector<std::vector<double>> a(s, std::vector<double>(2 * s, 0.0));
  for (std::size_t c = 0; c < s; ++c) {
    for (const auto& [r, val] : col_[head_[struct_pos[c]]]) {
      if (k_index[r] >= 0) a[static_cast<std::size_t>(k_index[r])][c] = val;
    }
  }
  for (std::size_t r = 0; r < s; ++r) a[r][s + r] = 1.0;
  std::vector<std::size_t> row_of(s);
  std::vector<char> used(s, 0);
  for (std::size_t c = 0; c < s; ++c) {
    std::size_t best = s;
    double best_val = 0.0;
    for (std::size_t r = 0; r < s; ++r) {
      if (!used[r] && std::abs(a[r][c]) > best_val) {
        best_val = std::abs(a[r][c]);
        best = r;
      }
    }
    if (best == s || best_val < 1e-10) return false;
    used[best] = 1;
    row_of[c] = best;
    const double p = a[best][c];
    for (std::size_t k = c; k < 2 * s; ++k) a[best][k] /= p;
    for (std::size_t r = 0; r < s; ++r) {
      if (r == best) continue;
      const double f = a[r][c];
      if (f == 0.0) continue;
      auto& ar = a[r];
      const auto& ab = a[best];
      for (std::size_t k = c; k < 2 * s; ++k) ar[k] -= f * ab[k];
    }
  }
  // inv[c] = row of A_KS^-1 for structural position c, over K rows.
  std::vector<std::vector<double>> inv(s);
  for (std::size_t c = 0; c < s; ++c) {
    inv[c].assign(a[row_of[c]].begin() + static_cast<std::ptrdiff_t>(s), a[row_of[c]].end());
  }
  std::vector<std::ptrdiff_t> spos(n, -1);
  for (std::size_t c = 0; c < s; ++c) spos[head_[struct_pos[c]]] = static_cast<std::ptrdiff_t>(c);
  for (std::size_t i = 0; i < m; ++i) {
    auto& dst = binv_[i];
    std::fill(dst.begin(), dst.end(), 0.0);
    const std::size_t v = head_[i];
    if (v < n) {
      const auto& src = inv[static_cast<std::size_t>(spos[v])];
      for (std::size_t k = 0; k < s; ++k) dst[k_rows[k]] = src[k];
    } else {
      const std::size_t l = v - n;
      const SparseRow& row = rows_[l];
      for (std::size_t t = 0; t < row.index.size(); ++t) {
        const std::ptrdiff_t c = spos[row.index[t]];
        if (c < 0) continue;
        const auto& src = inv[static_cast<std::size_t>(c)];
        const double coef = row.value[t];
        for (std::size_t k = 0; k < s; ++k) dst[k_rows[k]] += coef * src[k];
      }
      dst[l] = -1.0;
    }
  }
  since_refactor_ = 0;
  return true;
}

void CoverLp::reset_basis() {
  const std::size_t n = cost_.size();
  const std::size_t m = rows_.size();
  for (std::size_t j = 0; j < n; ++j) {
    pos_[j] = -1;
    d_[j] = cost_[j];
    x_[j] = d_[j] < 0.0 ? hi_[j] : lo_[j];
  }
  for (std::size_t r = 0; r < m; ++r) {
    head_[r] = n + r;
    pos_[n + r] = static_cast<std::ptrdiff_t>(r);
    std::fill(binv_[r].begin(), binv_[r].end(), 0.0);
    binv_[r][r] = -1.0;
  }
  since_refactor_ = 0;
  recompute();
}

void CoverLp::recompute() {
  const std::size_t n = cost_.size();
  const std::size_t m = rows_.size();
  std::vector<double> rhs(m);
  for (std::size_t r = 0; r < m; ++r) rhs[r] = rows_[r].rhs;
  for (std::size_t j = 0; j < n; ++j) {
    if (pos_[j] >= 0 || x_[j] == 0.0) continue;
    for (const auto& [r, a] : col_[j]) rhs[r] -= a * x_[j];
  }
  // Nonbasic surpluses sit at zero.
  for (std::size_t i = 0; i < m; ++i) {
    double v = 0.0;
    const auto& bi = binv_[i];
    for (std::size_t k = 0; k < m; ++k) v += bi[k] * rhs[k];
    x_[head_[i]] = v;
  }
  std::vector<double> pi(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t v = head_[i];
    const double c = v < n ? cost_[v] : 0.0;
    if (c == 0.0) continue;
    const auto& bi = binv_[i];
    for (std::size_t k = 0; k < m; ++k) pi[k] += c * bi[k];
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (pos_[j] >= 0) {
      d_[j] = 0.0;
      continue;
    }
    double v = cost_[j];
    for (const auto& [r, a] : col_[j]) v -= pi[r] * a;
    d_[j] = v;
  }
  for (std::size_t r = 0; r < m; ++r) d_[n + r] = pos_[n + r] >= 0 ? 0.0 : pi[r];
  dirty_ = false;
}

CoverLp::Status CoverLp::solve(std::size_t max_iterations) {
  const std::size_t n = cost_.size();
  std::vector<double> alpha, w;
  int resets = 0, unclean = 0;
  // Falls back to the slack basis, at most twice per solve.
  auto recover = [&](int& count) {
    if (++count > 2) return false;
    reset_basis();
    return true;
  };
  if (dirty_) recompute();
  for (std::size_t it = 0; it < max_iterations; ++it) {
    const std::size_t m = rows_.size();
    if (since_refactor_ >= kRefactorEvery) {
      if (!refactor() && !recover(resets)) return Status::IterationLimit;
      recompute();
    }
    std::size_t leave = m;
    double worst = kPrimalTol;
    bool to_lower = true;
    for (std::size_t i = 0; i < m; ++i) {
      const std::size_t v = head_[i];
      const double lo = var_lo(v), hi = var_hi(v);
      if (x_[v] < lo - worst) {
        worst = lo - x_[v];
        leave = i;
        to_lower = true;
      } else if (x_[v] > hi + worst) {
        worst = x_[v] - hi;
        leave = i;
        to_lower = false;
      }
    }
    if (leave == m) {
      // Confirm on recomputed values before declaring optimality.
      recompute();
      bool clean = true;
      for (std::size_t i = 0; i < m && clean; ++i) {
        const std::size_t v = head_[i];
        clean = x_[v] >= var_lo(v) - kPrimalTol && x_[v] <= var_hi(v) + kPrimalTol;
      }
      if (clean) return Status::Optimal;
      if (since_refactor_ == 0 && ++unclean > 3 && !recover(resets)) return Status::IterationLimit;
      if (!refactor() && !recover(resets)) return Status::IterationLimit;
      recompute();
      continue;
    }

    const auto& rho = binv_[leave];
    alpha.assign(n + m, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      if (pos_[j] >= 0) continue;
      double v = 0.0;
      for (const auto& [r, a] : col_[j]) v += rho[r] * a;
      alpha[j] = v;
    }
    for (std::size_t r = 0; r < m; ++r) {
      if (pos_[n + r] < 0) alpha[n + r] = -rho[r];
    }

    std::size_t enter = n + m;
    double best_ratio = kInf, best_alpha = 0.0;
    for (std::size_t v = 0; v < n + m; ++v) {
      if (pos_[v] >= 0) continue;
      const double a = alpha[v];
      if (std::abs(a) < kPivotTol) continue;
      const double lo = var_lo(v), hi = var_hi(v);
      if (lo == hi) continue;
      const bool at_lower = x_[v] <= lo;
      // Moving v must push the leaving variable toward its violated bound.
      bool ok;
      if (to_lower) {
        ok = at_lower ? a < 0.0 : a > 0.0;
      } else {
        ok = at_lower ? a > 0.0 : a < 0.0;
      }
      if (!ok) continue;
      const double ratio = std::max(0.0, at_lower ? d_[v] : -d_[v]) / std::abs(a);
      if (ratio < best_ratio - 1e-12 ||
          (ratio <= best_ratio + 1e-12 && std::abs(a) > best_alpha)) {
        best_ratio = ratio;
        best_alpha = std::abs(a);
        enter = v;
      }
    }
    if (enter == n + m) {
      // Trust a dual ray only on a fresh factorization.
      if (since_refactor_ == 0) return Status::Infeasible;
      if (!refactor() && !recover(resets)) return Status::IterationLimit;
      recompute();
      continue;
    }

    binv_column(enter, w);
    const std::size_t lv = head_[leave];
    const double target = to_lower ? var_lo(lv) : var_hi(lv);
    const double delta = (x_[lv] - target) / w[leave];
    for (std::size_t i = 0; i < m; ++i) {
      if (w[i] != 0.0) x_[head_[i]] -= w[i] * delta;
    }
    x_[enter] += delta;
    x_[lv] = target;

    const double theta = d_[enter] / alpha[enter];
    for (std::size_t v = 0; v < n + m; ++v) {
      if (pos_[v] < 0 && alpha[v] != 0.0) d_[v] -= theta * alpha[v];
    }
    d_[enter] = 0.0;
    d_[lv] = -theta;

    const double p = w[leave];
    auto& pivot_row = binv_[leave];
    for (double& v : pivot_row) v /= p;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == leave || w[i] == 0.0) continue;
      const double f = w[i];
      auto& bi = binv_[i];
      for (std::size_t k = 0; k < m; ++k) bi[k] -= f * pivot_row[k];
    }
    head_[leave] = enter;
    pos_[enter] = static_cast<std::ptrdiff_t>(leave);
    pos_[lv] = -1;
    ++iterations_;
    ++since_refactor_;
  }
  return Status::IterationLimit;
}

double CoverLp::objective() const {
  double v = 0.0;
  for (std::size_t j = 0; j < cost_.size(); ++j) v += cost_[j] * x_[j];
  return v;
}

CoverLp::TableauRow CoverLp::tableau_row(std::size_t position) const {
  const std::size_t n = cost_.size();
  const std::size_t m = rows_.size();
  TableauRow t;
  t.basic = head_[position];
  t.alpha.assign(n + m, 0.0);
  const auto& rho = binv_[position];
  for (std::size_t j = 0; j < n; ++j) {
    if (pos_[j] >= 0) continue;
    double v = 0.0;
    for (const auto& [r, a] : col_[j]) v += rho[r] * a;
    t.alpha[j] = v;
  }
  for (std::size_t r = 0; r < m; ++r) {
    if (pos_[n + r] < 0) t.alpha[n + r] = -rho[r];
  }
  double beta = 0.0;
  for (std::size_t r = 0; r < m; ++r) beta += rho[r] * rows_[r].rhs;
  t.beta = beta;
  return t;
}

}  // namespace gridcode::detail

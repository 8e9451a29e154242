#include "cover_bc.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <random>
#include <unordered_set>

#include "covering_lp.hpp"

namespace gridcode::detail {

namespace {

constexpr double kIntTol = 1e-6;
constexpr double kBoundTol = 1e-6;
constexpr double kMinViolation = 1e-3;
// Gomory rounds at the root and the number of weak rounds that end cutting.
constexpr int kGomoryRounds = 30;
constexpr int kStallRounds = 10;

class BitRow {
 public:
  BitRow() = default;
  explicit BitRow(std::size_t n) : w_((n + 63) / 64, 0) {}
  void flip(std::size_t i) { w_[i >> 6] ^= std::uint64_t{1} << (i & 63); }
  bool test(std::size_t i) const { return (w_[i >> 6] >> (i & 63)) & 1; }
  void operator^=(const BitRow& o) {
    for (std::size_t i = 0; i < w_.size(); ++i) w_[i] ^= o.w_[i];
  }
  template <typename F>
  void for_each(F&& f) const {
    for (std::size_t i = 0; i < w_.size(); ++i) {
      for (std::uint64_t w = w_[i]; w; w &= w - 1) {
        f(i * 64 + static_cast<std::size_t>(std::countr_zero(w)));
      }
    }
  }

 private:
  std::vector<std::uint64_t> w_;
};

struct RowInfo {
  bool integral = true;
};

struct CutKey {
  std::size_t operator()(const SparseRow& r) const {
    std::size_t h = std::hash<double>{}(r.rhs);
    for (std::size_t k = 0; k < r.index.size(); ++k) {
      h = h * 1000003u ^ (r.index[k] * 31u + std::hash<double>{}(r.value[k]));
    }
    return h;
  }
};
struct CutEq {
  bool operator()(const SparseRow& a, const SparseRow& b) const {
    return a.rhs == b.rhs && a.index == b.index && a.value == b.value;
  }
};

double activity(const SparseRow& r, const std::vector<double>& x) {
  double v = 0.0;
  for (std::size_t k = 0; k < r.index.size(); ++k) v += r.value[k] * x[r.index[k]];
  return v;
}

}  // namespace

struct CoverBranchAndCut::Impl {
  std::size_t n;
  std::vector<std::vector<std::size_t>> elem_cols;
  std::vector<std::vector<std::size_t>> col_elems;
  CoverLp lp;
  // Every row ever generated; the LP holds the active subset and inactive
  // rows return when violated.
  std::vector<SparseRow> pool_rows;
  std::vector<char> pool_integral, pool_active;
  std::vector<std::size_t> lp_row;  // LP row -> pool index
  std::unordered_set<SparseRow, CutKey, CutEq> seen;
  std::uint64_t nodes = 0;
  double root = 0.0;

  // Optimization state.
  std::size_t best = 0;
  std::vector<std::size_t> incumbent;

  Impl(std::size_t columns, std::vector<std::vector<std::size_t>> ec)
      : n(columns), elem_cols(std::move(ec)), col_elems(columns),
        lp(std::vector<double>(columns, 1.0)) {
    for (std::size_t e = 0; e < elem_cols.size(); ++e) {
      SparseRow row;
      for (std::size_t c : elem_cols[e]) {
        row.index.push_back(c);
        row.value.push_back(1.0);
        col_elems[c].push_back(e);
      }
      add_row(std::move(row), true);
    }
  }

  bool integral(std::size_t lp_r) const { return pool_integral[lp_row[lp_r]]; }

  void activate(std::size_t id) {
    pool_active[id] = 1;
    lp_row.push_back(id);
    lp.add_row(pool_rows[id]);
  }

  void add_row(SparseRow row, bool is_integral) {
    if (is_integral) seen.insert(row);
    pool_rows.push_back(std::move(row));
    pool_integral.push_back(is_integral);
    pool_active.push_back(0);
    activate(pool_rows.size() - 1);
  }

  void drop_slack(double slack) {
    std::vector<char> drop = lp.drop_slack_rows(slack, 0);
    std::vector<std::size_t> kept;
    for (std::size_t r = 0; r < drop.size(); ++r) {
      if (drop[r]) {
        pool_active[lp_row[r]] = 0;
      } else {
        kept.push_back(lp_row[r]);
      }
    }
    lp_row = std::move(kept);
  }

  // Solves the LP over the active rows, re-activating violated pool rows.
  bool solve_lp() {
    for (;;) {
      if (lp.solve() != CoverLp::Status::Optimal) return false;
      const auto& x = lp.x();
      bool added = false;
      for (std::size_t id = 0; id < pool_rows.size(); ++id) {
        if (pool_active[id]) continue;
        if (activity(pool_rows[id], x) < pool_rows[id].rhs - 1e-9) {
          activate(id);
          added = true;
        }
      }
      if (!added) return true;
    }
  }

  // --- cut separation -------------------------------------------------

  // {0, 1/2}-cuts: odd combinations of integral rows and unit bounds whose
  // slack plus odd-column cost is below 1, found by eliminating fractional
  // columns over GF(2).
  std::vector<SparseRow> zero_half(const std::vector<double>& x, std::size_t max_cuts) {
    std::vector<std::ptrdiff_t> fidx(n, -1);
    std::vector<std::size_t> frac;
    std::vector<double> cost;
    for (std::size_t j = 0; j < n; ++j) {
      if (x[j] > kIntTol && x[j] < 1.0 - kIntTol) {
        fidx[j] = static_cast<std::ptrdiff_t>(frac.size());
        frac.push_back(j);
        cost.push_back(std::min(x[j], 1.0 - x[j]));
      }
    }
    if (frac.empty()) return {};
    const std::size_t m = lp.rows();
    struct Item {
      BitRow bits;
      BitRow rows;
      bool parity = false;
      double slack = 0.0;
      double total = 0.0;
      bool alive = true;
    };
    std::vector<Item> items;
    for (std::size_t r = 0; r < m; ++r) {
      if (!integral(r)) continue;
      const double s = std::max(0.0, lp.surplus(r));
      if (s >= 1.0 - kMinViolation) continue;
      const SparseRow& row = lp.row(r);
      Item it{BitRow(frac.size()), BitRow(m), false, s, 0.0, true};
      bool parity = static_cast<long>(std::llround(row.rhs)) & 1;
      bool any = false;
      for (std::size_t k = 0; k < row.index.size(); ++k) {
        const long a = std::llround(row.value[k]);
        if (!(a & 1)) continue;
        const std::size_t j = row.index[k];
        if (x[j] > 0.5) parity = !parity;
        if (fidx[j] >= 0) {
          it.bits.flip(static_cast<std::size_t>(fidx[j]));
          any = true;
        }
      }
      if (!any && !parity) continue;
      it.parity = parity;
      it.rows.flip(r);
      items.push_back(std::move(it));
    }
    auto total_of = [&](Item& it) {
      double t = it.slack;
      it.bits.for_each([&](std::size_t k) { t += cost[k]; });
      it.total = t;
    };
    std::vector<SparseRow> found;
    auto consider = [&](const Item& it) {
      if (!it.alive || !it.parity || it.total >= 1.0 - 2 * kMinViolation) return;
      build_zero_half(it.rows, x, found);
    };
    for (auto& it : items) {
      total_of(it);
      consider(it);
    }
    std::vector<std::size_t> order(frac.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return cost[a] > cost[b]; });
    for (std::size_t k : order) {
      if (found.size() >= 4 * max_cuts) break;
      std::size_t pivot = items.size();
      for (std::size_t i = 0; i < items.size(); ++i) {
        if (!items[i].alive || !items[i].bits.test(k)) continue;
        if (pivot == items.size() || items[i].slack < items[pivot].slack) pivot = i;
      }
      if (pivot == items.size()) continue;
      for (std::size_t i = 0; i < items.size(); ++i) {
        Item& it = items[i];
        if (i == pivot || !it.alive || !it.bits.test(k)) continue;
        it.bits ^= items[pivot].bits;
        it.rows ^= items[pivot].rows;
        it.parity = it.parity != items[pivot].parity;
        it.slack += items[pivot].slack;
        if (it.slack >= 1.0 - 2 * kMinViolation) {
          it.alive = false;
          continue;
        }
        total_of(it);
        consider(it);
      }
    }
    std::sort(found.begin(), found.end(), [&](const SparseRow& a, const SparseRow& b) {
      return a.rhs - activity(a, x) > b.rhs - activity(b, x);
    });
    if (found.size() > max_cuts) found.resize(max_cuts);
    return found;
  }

  void build_zero_half(const BitRow& rows, const std::vector<double>& x,
                       std::vector<SparseRow>& out) {
    std::vector<long> g(n, 0);
    long beta = 0;
    rows.for_each([&](std::size_t r) {
      const SparseRow& row = lp.row(r);
      beta += std::llround(row.rhs);
      for (std::size_t k = 0; k < row.index.size(); ++k) {
        g[row.index[k]] += std::llround(row.value[k]);
      }
    });
    for (std::size_t j = 0; j < n; ++j) {
      if ((g[j] & 1) && x[j] > 0.5) {
        --g[j];
        --beta;
      }
    }
    const long rhs = beta >= 0 ? (beta + 1) / 2 : beta / 2;
    if (rhs <= 0) return;
    SparseRow cut;
    cut.rhs = static_cast<double>(rhs);
    double lhs = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (g[j] <= 0) continue;
      const long c = std::min((g[j] + 1) / 2, rhs);
      cut.index.push_back(j);
      cut.value.push_back(static_cast<double>(c));
      lhs += static_cast<double>(c) * x[j];
    }
    if (cut.rhs - lhs < kMinViolation) return;
    if (seen.count(cut)) return;
    out.push_back(std::move(cut));
  }

  // Gomory mixed-integer cuts from rows of fractional basic columns. Only
  // valid with global bounds, so used at the root.
  std::vector<SparseRow> gomory(const std::vector<double>& x, std::size_t max_cuts) {
    std::vector<std::pair<double, std::size_t>> cand;
    for (std::size_t j = 0; j < n; ++j) {
      if (!lp.is_basic(j)) continue;
      const double f = x[j] - std::floor(x[j]);
      if (f < 0.01 || f > 0.99) continue;
      cand.emplace_back(-std::min(f, 1.0 - f), j);
    }
    std::sort(cand.begin(), cand.end());
    std::vector<SparseRow> out;
    const std::size_t m = lp.rows();
    for (const auto& [score, j] : cand) {
      (void)score;
      if (out.size() >= max_cuts) break;
      std::size_t position = 0;
      while (lp.basic_at(position) != j) ++position;
      const auto t = lp.tableau_row(position);
      const double f0 = x[j] - std::floor(x[j]);
      std::vector<double> pi(n, 0.0);
      double pi0 = 1.0;
      bool ok = true;
      for (std::size_t v = 0; v < n + m && ok; ++v) {
        double a = t.alpha[v];
        if (std::abs(a) < 1e-11 || lp.is_basic(v)) continue;
        if (v < n) {
          if (lp.lo(v) == lp.hi(v)) continue;
          const bool upper = x[v] >= lp.hi(v);
          if (upper) a = -a;
          const double f = a - std::floor(a);
          const double g = f <= f0 ? f / f0 : (1.0 - f) / (1.0 - f0);
          if (upper) {
            pi[v] -= g;
            pi0 -= g * lp.hi(v);
          } else {
            pi[v] += g;
            pi0 += g * lp.lo(v);
          }
        } else {
          const std::size_t r = v - n;
          double g;
          if (integral(r)) {
            const double f = a - std::floor(a);
            g = f <= f0 ? f / f0 : (1.0 - f) / (1.0 - f0);
          } else {
            g = a >= 0.0 ? a / f0 : -a / (1.0 - f0);
          }
          if (g == 0.0) continue;
          const SparseRow& row = lp.row(r);
          for (std::size_t k = 0; k < row.index.size(); ++k) pi[row.index[k]] += g * row.value[k];
          pi0 += g * row.rhs;
        }
      }
      SparseRow cut;
      double big = 0.0, small = 1e300;
      for (std::size_t c = 0; c < n; ++c) {
        if (std::abs(pi[c]) < 1e-9) {
          if (pi[c] > 0.0) pi0 -= pi[c];
          continue;
        }
        cut.index.push_back(c);
        cut.value.push_back(pi[c]);
        big = std::max(big, std::abs(pi[c]));
        small = std::min(small, std::abs(pi[c]));
      }
      if (cut.index.empty() || big / small > 1e4) continue;
      for (double& v : cut.value) v /= big;
      cut.rhs = pi0 / big;
      if (cut.rhs - activity(cut, x) < kMinViolation) continue;
      out.push_back(std::move(cut));
    }
    return out;
  }

  void add_cuts(std::vector<SparseRow> cuts, bool is_integral) {
    for (auto& c : cuts) add_row(std::move(c), is_integral);
  }

  // Solves the node LP and adds cut rounds while the bound moves. Returns
  // false when the node is infeasible.
  bool bound(double cutoff, int rounds, bool at_root, double& value) {
    if (!solve_lp()) return false;
    value = lp.objective();
    double last = value;
    int stall = 0;
    for (int round = 0; round < rounds; ++round) {
      if (value > cutoff) break;
      const std::vector<double> x(lp.x().begin(), lp.x().begin() + static_cast<std::ptrdiff_t>(n));
      auto zh = zero_half(x, at_root ? 200 : 50);
      std::vector<SparseRow> gm;
      if (at_root && round < kGomoryRounds) gm = gomory(x, 50);
      if (zh.empty() && gm.empty()) break;
      add_cuts(std::move(zh), true);
      add_cuts(std::move(gm), false);
      if (lp.rows() > 2 * n) drop_slack(0.05);
      if (!solve_lp()) return false;
      value = lp.objective();
      if (value < last + 1e-3) {
        if (++stall >= kStallRounds) break;
      } else {
        stall = 0;
      }
      last = value;
    }
    return true;
  }

  // --- primal heuristic --------------------------------------------------

  std::vector<std::size_t> round_lp(const std::vector<double>& x) {
    const std::size_t E = elem_cols.size();
    std::vector<std::size_t> hits(E, 0);
    std::vector<char> chosen(n, 0);
    std::size_t uncovered = E;
    auto take = [&](std::size_t c) {
      chosen[c] = 1;
      for (std::size_t e : col_elems[c]) {
        if (hits[e]++ == 0) --uncovered;
      }
    };
    for (std::size_t c = 0; c < n; ++c) {
      if (lp.lo(c) > 0.5 || x[c] >= 1.0 - kIntTol) take(c);
    }
    while (uncovered > 0) {
      std::size_t best_c = n;
      double best_score = -1.0;
      for (std::size_t c = 0; c < n; ++c) {
        if (chosen[c] || lp.hi(c) < 0.5) continue;
        std::size_t gain = 0;
        for (std::size_t e : col_elems[c]) gain += hits[e] == 0;
        if (gain == 0) continue;
        const double score = static_cast<double>(gain) * (0.25 + x[c]);
        if (score > best_score) {
          best_score = score;
          best_c = c;
        }
      }
      if (best_c == n) return {};
      take(best_c);
    }
    std::vector<std::size_t> sel;
    for (std::size_t c = 0; c < n; ++c) {
      if (chosen[c]) sel.push_back(c);
    }
    std::stable_sort(sel.begin(), sel.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
    std::vector<std::size_t> out;
    for (std::size_t c : sel) {
      const bool needed = lp.lo(c) > 0.5 ||
                          std::any_of(col_elems[c].begin(), col_elems[c].end(),
                                      [&](std::size_t e) { return hits[e] == 1; });
      if (needed) {
        out.push_back(c);
      } else {
        for (std::size_t e : col_elems[c]) --hits[e];
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  // --- search ------------------------------------------------------------

  struct Fix {
    std::size_t col;
    double lo, hi;
  };

  // Fixes columns whose reduced cost rules them out of any solution with
  // value <= limit. Records old bounds on the trail.
  void reduced_cost_fixing(double value, double limit, std::vector<Fix>& trail) {
    const auto& x = lp.x();
    for (std::size_t j = 0; j < n; ++j) {
      if (lp.is_basic(j) || lp.lo(j) == lp.hi(j)) continue;
      const double d = lp.reduced_cost(j);
      if (x[j] <= lp.lo(j) && value + d > limit + kBoundTol) {
        trail.push_back({j, lp.lo(j), lp.hi(j)});
        lp.set_bounds(j, lp.lo(j), lp.lo(j));
      } else if (x[j] >= lp.hi(j) && value - d > limit + kBoundTol) {
        trail.push_back({j, lp.lo(j), lp.hi(j)});
        lp.set_bounds(j, lp.hi(j), lp.hi(j));
      }
    }
  }

  void undo(std::vector<Fix>& trail, std::size_t mark) {
    while (trail.size() > mark) {
      const Fix f = trail.back();
      trail.pop_back();
      lp.set_bounds(f.col, f.lo, f.hi);
    }
  }

  // Iterated local search: replace two columns by one while possible, then
  // perturb with a coverage-preserving swap. Deterministic for a given input.
  std::vector<std::size_t> local_search(std::vector<std::size_t> cover, std::size_t rounds) {
    const std::size_t E = elem_cols.size();
    std::vector<std::size_t> hits(E, 0);
    std::vector<char> in(n, 0);
    for (std::size_t c : cover) {
      in[c] = 1;
      for (std::size_t e : col_elems[c]) ++hits[e];
    }
    auto usable = [&](std::size_t c) { return !in[c] && lp.hi(c) > 0.5; };
    auto removable = [&](std::size_t c) { return lp.lo(c) < 0.5; };
    std::vector<std::size_t> bestc = cover;
    std::mt19937_64 rng(cover.size());
    std::vector<std::size_t> uncovered;
    std::vector<unsigned> mark(E, 0);
    unsigned clock = 0;
    // Elements left uncovered when columns `a` and `b` leave.
    std::vector<std::size_t> own(E, 0);
    auto orphans = [&](std::size_t a, std::size_t b) {
      uncovered.clear();
      ++clock;
      for (std::size_t c : {a, b}) {
        if (c == n) continue;
        for (std::size_t e : col_elems[c]) {
          if (mark[e] != clock) {
            mark[e] = clock;
            own[e] = 0;
          }
          ++own[e];
        }
      }
      for (std::size_t c : {a, b}) {
        if (c == n) continue;
        for (std::size_t e : col_elems[c]) {
          if (own[e] == hits[e]) uncovered.push_back(e);
          own[e] = 0;  // report once
        }
      }
    };
    auto covers_all = [&](std::size_t c) {
      ++clock;
      for (std::size_t e : col_elems[c]) mark[e] = clock;
      return std::all_of(uncovered.begin(), uncovered.end(),
                         [&](std::size_t e) { return mark[e] == clock; });
    };
    auto swap_in = [&](std::size_t out1, std::size_t out2, std::size_t add) {
      for (std::size_t c : {out1, out2}) {
        if (c == n) continue;
        in[c] = 0;
        for (std::size_t e : col_elems[c]) --hits[e];
      }
      in[add] = 1;
      for (std::size_t e : col_elems[add]) ++hits[e];
      cover.clear();
      for (std::size_t c = 0; c < n; ++c) {
        if (in[c]) cover.push_back(c);
      }
    };
    for (std::size_t round = 0; round < rounds; ++round) {
      bool improved = true;
      while (improved) {
        improved = false;
        for (std::size_t i = 0; i < cover.size() && !improved; ++i) {
          for (std::size_t k = i + 1; k < cover.size() && !improved; ++k) {
            const std::size_t a = cover[i], b = cover[k];
            if (!removable(a) || !removable(b)) continue;
            orphans(a, b);
            if (uncovered.empty()) continue;
            for (std::size_t c : elem_cols[uncovered.front()]) {
              if (usable(c) && covers_all(c)) {
                swap_in(a, b, c);
                improved = true;
                break;
              }
            }
          }
        }
      }
      if (cover.size() < bestc.size()) bestc = cover;
      // Perturb: a random coverage-preserving one-for-one swap.
      for (int tries = 0; tries < 50; ++tries) {
        const std::size_t a = cover[rng() % cover.size()];
        if (!removable(a)) continue;
        orphans(a, n);
        if (uncovered.empty()) continue;
        std::vector<std::size_t> options;
        for (std::size_t c : elem_cols[uncovered.front()]) {
          if (usable(c) && covers_all(c)) options.push_back(c);
        }
        if (options.empty()) continue;
        swap_in(a, n, options[rng() % options.size()]);
        break;
      }
    }
    return bestc;
  }

  // Fixes the largest fractional column to 1 until the LP is integral.
  void dive(std::vector<Fix>& trail) {
    const std::size_t mark = trail.size();
    for (;;) {
      const auto& x = lp.x();
      std::size_t pick = n;
      for (std::size_t j = 0; j < n; ++j) {
        if (x[j] <= kIntTol || x[j] >= 1.0 - kIntTol) continue;
        if (pick == n || x[j] > x[pick]) pick = j;
      }
      if (pick == n) break;
      trail.push_back({pick, lp.lo(pick), lp.hi(pick)});
      lp.set_bounds(pick, 1.0, 1.0);
      if (!solve_lp()) break;
      if (lp.objective() > static_cast<double>(best) - 1.0 + kBoundTol) break;
    }
    if (lp.solve() == CoverLp::Status::Optimal) {
      std::vector<double> x(lp.x().begin(), lp.x().begin() + static_cast<std::ptrdiff_t>(n));
      improve(round_lp(x));
    }
    undo(trail, mark);
    solve_lp();
  }

  void improve(std::vector<std::size_t> cover) {
    if (cover.empty()) return;
    if (cover.size() <= best + 1) cover = local_search(std::move(cover), nodes <= 1 ? 200 : 10);
    std::sort(cover.begin(), cover.end());
    if (cover.size() < best) {
      best = cover.size();
      incumbent = cover;
      if (best <= stop_size) stopped = true;
    }
  }

  // Pseudo-costs per unit change, seeded by strong branching.
  std::vector<double> pc_sum[2];
  std::vector<std::size_t> pc_count[2];
  static constexpr std::size_t kPruned = static_cast<std::size_t>(-1);

  double predicted(std::size_t j, int side, double frac_part) const {
    double avg = 1.0;
    if (pc_count[side][j] > 0) avg = pc_sum[side][j] / static_cast<double>(pc_count[side][j]);
    return avg * (side == 1 ? 1.0 - frac_part : frac_part);
  }

  // Reliability branching on fractional columns. Children that strong
  // branching proves useless fix the column to the other side. Returns n for
  // an integral optimum and kPruned when the node is closed.
  std::size_t choose_branch(double& value, std::vector<double>& x, double cutoff,
                            std::vector<Fix>& trail) {
    if (pc_sum[0].empty()) {
      for (int s = 0; s < 2; ++s) {
        pc_sum[s].assign(n, 0.0);
        pc_count[s].assign(n, 0);
      }
    }
    constexpr std::size_t kReliable = 4;
    constexpr std::size_t kMaxStrong = 10;
    constexpr std::size_t kStrongIterations = 200;
    for (;;) {
      std::vector<std::size_t> cand;
      for (std::size_t j = 0; j < n; ++j) {
        if (x[j] > kIntTol && x[j] < 1.0 - kIntTol) cand.push_back(j);
      }
      if (cand.empty()) return n;
      auto score = [](double a, double b) { return std::max(a, 1e-6) * std::max(b, 1e-6); };
      std::vector<double> est(n, 0.0);
      for (std::size_t j : cand) est[j] = score(predicted(j, 0, x[j]), predicted(j, 1, x[j]));
      std::stable_sort(cand.begin(), cand.end(),
                       [&](std::size_t a, std::size_t b) { return est[a] > est[b]; });
      std::size_t pick = cand.front();
      double pick_score = -1.0;
      std::size_t strong = 0, since_better = 0;
      std::vector<std::pair<std::size_t, double>> fixes;
      for (std::size_t j : cand) {
        const bool reliable = std::min(pc_count[0][j], pc_count[1][j]) >= kReliable;
        if (reliable || strong >= kMaxStrong) {
          if (est[j] > pick_score) {
            pick_score = est[j];
            pick = j;
          }
          continue;
        }
        ++strong;
        const double lo = lp.lo(j), hi = lp.hi(j);
        double child[2];
        for (int side = 0; side < 2; ++side) {
          lp.set_bounds(j, side, side);
          const auto st = lp.solve(kStrongIterations);
          child[side] = st == CoverLp::Status::Infeasible ? 1e300 : lp.objective();
          lp.set_bounds(j, lo, hi);
          if (child[side] < 1e299) {
            const double change = side == 1 ? 1.0 - x[j] : x[j];
            pc_sum[side][j] += std::max(0.0, child[side] - value) / change;
            ++pc_count[side][j];
          }
        }
        if (child[0] > cutoff || child[1] > cutoff) {
          if (child[0] > cutoff && child[1] > cutoff) return kPruned;
          fixes.emplace_back(j, child[0] > cutoff ? 1.0 : 0.0);
          continue;
        }
        const double sc = score(child[0] - value, child[1] - value);
        if (sc > pick_score) {
          pick_score = sc;
          pick = j;
          since_better = 0;
        } else if (++since_better >= 4) {
          break;
        }
      }
      if (lp.solve() != CoverLp::Status::Optimal) return kPruned;
      if (fixes.empty()) return pick;
      for (const auto& [j, v] : fixes) {
        trail.push_back({j, lp.lo(j), lp.hi(j)});
        lp.set_bounds(j, v, v);
      }
      if (!solve_lp()) return kPruned;
      value = lp.objective();
      if (value > cutoff) return kPruned;
      x.assign(lp.x().begin(), lp.x().begin() + static_cast<std::ptrdiff_t>(n));
    }
  }

  // Depth-first branch and cut for a cover smaller than `best`. Stops early
  // once best <= stop_size.
  void optimize(std::vector<Fix>& trail, int depth) {
    if (stopped) return;
    ++nodes;
    double value = 0.0;
    const bool first = depth == 0;
    const double cutoff = static_cast<double>(best) - 1.0 + kBoundTol;
    if (!bound(cutoff, first ? 200 : 3, first && global_root, value)) return;
    if (first && global_root) root = value;
    if (lp.rows() > n + 100) {
      drop_slack(1e-3);
      if (!solve_lp()) return;
    }
    if (value > cutoff) return;
    std::vector<double> x(lp.x().begin(), lp.x().begin() + static_cast<std::ptrdiff_t>(n));
    improve(round_lp(x));
    if (first && !stopped) {
      dive(trail);
      x.assign(lp.x().begin(), lp.x().begin() + static_cast<std::ptrdiff_t>(n));
    }
    if (stopped || value > static_cast<double>(best) - 1.0 + kBoundTol) return;

    const std::size_t mark = trail.size();
    reduced_cost_fixing(value, static_cast<double>(best) - 1.0, trail);
    const std::size_t pick = choose_branch(value, x, static_cast<double>(best) - 1.0 + kBoundTol, trail);
    if (pick == kPruned) {
      undo(trail, mark);
      return;
    }
    if (pick == n) {
      // Integral LP optimum: a cover no larger than the bound.
      std::vector<std::size_t> cover;
      for (std::size_t j = 0; j < n; ++j) {
        if (x[j] > 0.5) cover.push_back(j);
      }
      improve(cover);
      undo(trail, mark);
      return;
    }
    const double lo = lp.lo(pick), hi = lp.hi(pick);
    for (double side : {1.0, 0.0}) {
      if (stopped || static_cast<double>(best) - 1.0 + kBoundTol < std::ceil(value - kBoundTol)) break;
      lp.set_bounds(pick, side, side);
      optimize(trail, depth + 1);
      lp.set_bounds(pick, lo, hi);
    }
    undo(trail, mark);
  }

  // A cover of at most `size` columns under the current bounds.
  bool feasible(std::size_t size, std::vector<std::size_t>& witness) {
    best = size + 1;
    incumbent.clear();
    stop_size = size;
    stopped = false;
    std::vector<Fix> trail;
    optimize(trail, 0);
    stopped = false;
    solve_lp();
    if (best > size) return false;
    witness = incumbent;
    return true;
  }

  // Lexicographic enumeration of covers of `size` columns: columns in index
  // order, taken before skipped. `witness` is a cover consistent with the
  // current bounds; a branch needs a fresh search only when it disagrees.
  bool lex(std::size_t size, std::size_t next, const std::vector<std::size_t>& witness,
           const std::function<bool(const std::vector<std::size_t>&)>& visit) {
    std::size_t ones = 0;
    for (std::size_t c = 0; c < n; ++c) ones += lp.lo(c) > 0.5;
    std::size_t j = next;
    while (j < n && lp.lo(j) == lp.hi(j)) ++j;
    if (ones == size || j == n) return visit(witness);
    const bool in = std::binary_search(witness.begin(), witness.end(), j);
    const double lo = lp.lo(j), hi = lp.hi(j);
    bool stop = false;
    for (double side : {1.0, 0.0}) {
      lp.set_bounds(j, side, side);
      std::vector<std::size_t> w = witness;
      if (in == (side == 1.0) || feasible(size, w)) stop = lex(size, j + 1, w, visit);
      lp.set_bounds(j, lo, hi);
      if (stop) break;
    }
    return stop;
  }

  bool global_root = true;
  bool stopped = false;
  std::size_t stop_size = 0;
};

CoverBranchAndCut::CoverBranchAndCut(std::size_t columns,
                                     std::vector<std::vector<std::size_t>> elem_cols)
    : impl_(std::make_unique<Impl>(columns, std::move(elem_cols))) {}

CoverBranchAndCut::~CoverBranchAndCut() = default;

std::size_t CoverBranchAndCut::minimum(std::vector<std::size_t> incumbent) {
  Impl& m = *impl_;
  std::sort(incumbent.begin(), incumbent.end());
  m.best = incumbent.size();
  m.incumbent = std::move(incumbent);
  m.stop_size = 0;
  std::vector<Impl::Fix> trail;
  m.optimize(trail, 0);
  m.global_root = false;
  m.solve_lp();
  return m.best;
}

void CoverBranchAndCut::enumerate(
    std::size_t size, const std::function<bool(const std::vector<std::size_t>&)>& visit) {
  Impl& m = *impl_;
  std::vector<std::size_t> witness;
  if (m.best == size && !m.incumbent.empty()) {
    witness = m.incumbent;
  } else if (!m.feasible(size, witness)) {
    return;
  }
  m.global_root = false;
  m.lex(size, 0, witness, visit);
}

const std::vector<std::size_t>& CoverBranchAndCut::incumbent() const {
  return impl_->incumbent;
}

std::uint64_t CoverBranchAndCut::nodes() const { return impl_->nodes; }
double CoverBranchAndCut::root_bound() const { return impl_->root; }

}  // namespace gridcode::detail

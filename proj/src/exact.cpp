// Exact minimum discriminating code via set-cover branch and bound.
//
// Pipeline: lex-safe reductions on the full universe (element dominance,
// duplicate/empty column removal, forced columns), split into independent
// components, then per component a memoized branch and bound on the
// uncovered set. Components with many columns go to the LP branch and cut
// instead. The lexicographic optimum is read off column by column:
// take the first column whose removal leaves an optimum one smaller.
// The union of per-component lexicographic optima is the global one.

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <map>
#include <numeric>
#include <tuple>
#include <unordered_map>

#include "cover_bc.hpp"
#include "gridcode/solver.hpp"

namespace gridcode {

namespace {

using Clock = std::chrono::steady_clock;

// Above this many columns the memo search loses to the LP engine.
constexpr std::size_t kLpColumns = 120;

class Bits {
 public:
  Bits() = default;
  explicit Bits(std::size_t n) : words_((n + 63) / 64, 0) {}

  void set(std::size_t i) { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
  bool test(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1; }
  bool none() const {
    return std::all_of(words_.begin(), words_.end(), [](auto w) { return w == 0; });
  }
  void subtract(const Bits& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~o.words_[i];
  }
  std::size_t count_and(const Bits& o) const {
    std::size_t n = 0;
    for (std::size_t i = 0; i < words_.size(); ++i) n += std::popcount(words_[i] & o.words_[i]);
    return n;
  }
  void intersect(const Bits& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
  }
  bool subset_of(const Bits& o) const {
    for (std::size_t i = 0; i < words_.size(); ++i) {
      if (words_[i] & ~o.words_[i]) return false;
    }
    return true;
  }
  std::size_t count() const {
    std::size_t n = 0;
    for (auto w : words_) n += std::popcount(w);
    return n;
  }
  bool intersects(const Bits& o) const {
    for (std::size_t i = 0; i < words_.size(); ++i) {
      if (words_[i] & o.words_[i]) return true;
    }
    return false;
  }
  template <typename F>
  void for_each(F&& f) const {
    for (std::size_t i = 0; i < words_.size(); ++i) {
      std::uint64_t w = words_[i];
      while (w) {
        f(i * 64 + static_cast<std::size_t>(std::countr_zero(w)));
        w &= w - 1;
      }
    }
  }
  template <typename F>
  void for_each_and(const Bits& o, F&& f) const {
    for (std::size_t i = 0; i < words_.size(); ++i) {
      std::uint64_t w = words_[i] & o.words_[i];
      while (w) {
        f(i * 64 + static_cast<std::size_t>(std::countr_zero(w)));
        w &= w - 1;
      }
    }
  }

  friend bool operator==(const Bits&, const Bits&) = default;
  std::size_t hash() const {
    std::uint64_t h = 0x9e3779b97f4a7c15ULL;
    for (auto w : words_) h = (h ^ w) * 0x100000001b3ULL + (h >> 29);
    return static_cast<std::size_t>(h);
  }

 private:
  std::vector<std::uint64_t> words_;
};

struct BitsHash {
  std::size_t operator()(const Bits& b) const { return b.hash(); }
};

// One independent sub-problem with dense local indices. Local columns are
// sorted by candidate id so index order is lexicographic order.
struct Component {
  std::vector<NodeId> ids;
  std::vector<std::size_t> source_cols;
  std::vector<std::vector<std::size_t>> col_elems;
  std::vector<std::vector<std::size_t>> elem_cols;
  std::vector<Bits> col_bits;
  std::size_t elem_count = 0;

  void finish() {
    col_bits.assign(ids.size(), Bits(elem_count));
    elem_cols.assign(elem_count, {});
    for (std::size_t c = 0; c < ids.size(); ++c) {
      for (std::size_t e : col_elems[c]) {
        col_bits[c].set(e);
        elem_cols[e].push_back(c);
      }
    }
  }
};

struct Reduced {
  std::vector<std::size_t> forced;  // source column indices
  std::vector<Component> components;
};

Reduced preprocess(const SetCoverInstance& sc, bool dedupe_columns, bool split) {
  const std::size_t C = sc.columns.size();
  const std::size_t E = sc.universe.size();
  std::vector<std::vector<std::size_t>> support(E);
  for (std::size_t c = 0; c < C; ++c) {
    for (std::size_t e : sc.columns[c]) support[e].push_back(c);
  }
  std::vector<char> alive_e(E, 1), alive_c(C, 1);
  Reduced out;

  std::vector<unsigned> stamp(C, 0);
  unsigned clock = 0;
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t e = 0; e < E; ++e) {
      if (!alive_e[e]) continue;
      auto& s = support[e];
      s.erase(std::remove_if(s.begin(), s.end(), [&](std::size_t c) { return !alive_c[c]; }),
              s.end());
    }

    // An element whose support contains another element's support is
    // implied by it.
    std::vector<std::size_t> order;
    for (std::size_t e = 0; e < E; ++e) {
      if (alive_e[e]) order.push_back(e);
    }
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return support[a].size() < support[b].size();
    });
    std::vector<std::vector<std::size_t>> kept_by_min(C);
    for (std::size_t e : order) {
      ++clock;
      for (std::size_t c : support[e]) stamp[c] = clock;
      bool dominated = false;
      for (std::size_t c : support[e]) {
        for (std::size_t f : kept_by_min[c]) {
          if (std::all_of(support[f].begin(), support[f].end(),
                          [&](std::size_t x) { return stamp[x] == clock; })) {
            dominated = true;
            break;
          }
        }
        if (dominated) break;
      }
      if (dominated) {
        alive_e[e] = 0;
      } else {
        kept_by_min[support[e].front()].push_back(e);
      }
    }

    std::vector<std::vector<std::size_t>> col_elems(C);
    for (std::size_t e = 0; e < E; ++e) {
      if (!alive_e[e]) continue;
      for (std::size_t c : support[e]) col_elems[c].push_back(e);
    }
    std::map<std::vector<std::size_t>, std::size_t> seen;
    for (std::size_t c = 0; c < C; ++c) {
      if (!alive_c[c]) continue;
      if (col_elems[c].empty()) {
        alive_c[c] = 0;
        continue;
      }
      if (!dedupe_columns) continue;
      auto [it, inserted] = seen.emplace(col_elems[c], c);
      if (inserted) continue;
      // keep the smaller id
      std::size_t& keep = it->second;
      if (sc.candidate_ids[c] < sc.candidate_ids[keep]) {
        alive_c[keep] = 0;
        keep = c;
      } else {
        alive_c[c] = 0;
      }
      changed = true;
    }

    for (std::size_t e = 0; e < E; ++e) {
      if (!alive_e[e]) continue;
      std::size_t live = 0, last = 0;
      for (std::size_t c : support[e]) {
        if (alive_c[c]) {
          ++live;
          last = c;
        }
      }
      if (live != 1) continue;
      out.forced.push_back(last);
      alive_c[last] = 0;
      for (std::size_t x : col_elems[last]) alive_e[x] = 0;
      changed = true;
    }
  }

  // Components over alive elements, linked through shared alive columns.
  std::vector<std::size_t> parent(E);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::vector<std::vector<std::size_t>> col_elems(C);
  for (std::size_t e = 0; e < E; ++e) {
    if (!alive_e[e]) continue;
    for (std::size_t c : support[e]) {
      if (alive_c[c]) col_elems[c].push_back(e);
    }
  }
  for (std::size_t c = 0; c < C; ++c) {
    if (!alive_c[c] || col_elems[c].empty()) continue;
    for (std::size_t e : col_elems[c]) {
      std::size_t a = find(e), b = find(col_elems[c].front());
      if (a != b) parent[a] = b;
    }
  }
  std::map<std::size_t, std::size_t> comp_of_root;
  std::vector<std::size_t> local_index(E, 0);
  for (std::size_t e = 0; e < E; ++e) {
    if (!alive_e[e]) continue;
    std::size_t root = split ? find(e) : 0;
    auto [it, inserted] = comp_of_root.emplace(root, out.components.size());
    if (inserted) out.components.emplace_back();
    Component& comp = out.components[it->second];
    local_index[e] = comp.elem_count++;
  }
  std::vector<std::size_t> col_order;
  for (std::size_t c = 0; c < C; ++c) {
    if (alive_c[c] && !col_elems[c].empty()) col_order.push_back(c);
  }
  std::sort(col_order.begin(), col_order.end(), [&](std::size_t a, std::size_t b) {
    return sc.candidate_ids[a] < sc.candidate_ids[b];
  });
  for (std::size_t c : col_order) {
    std::size_t root = split ? find(col_elems[c].front()) : 0;
    Component& comp = out.components[comp_of_root.at(root)];
    comp.ids.push_back(sc.candidate_ids[c]);
    comp.source_cols.push_back(c);
    std::vector<std::size_t> local;
    for (std::size_t e : col_elems[c]) local.push_back(local_index[e]);
    comp.col_elems.push_back(std::move(local));
  }
  for (Component& comp : out.components) comp.finish();
  return out;
}

// Memoized search on the uncovered set U. value(U, ub) is the minimum
// number of columns covering U when that is below ub; otherwise some lower
// bound >= ub. Independent parts of U are solved separately.
class Search {
 public:
  explicit Search(const Component& p) : p_(p), stamp_(p.ids.size(), 0) {}

  std::uint64_t nodes() const { return nodes_; }

  Bits everything() const {
    Bits all(p_.elem_count);
    for (std::size_t e = 0; e < p_.elem_count; ++e) all.set(e);
    return all;
  }

  std::size_t greedy(Bits uncovered) const {
    std::size_t size = 0;
    while (!uncovered.none()) {
      std::size_t best = 0, best_gain = 0;
      for (std::size_t c = 0; c < p_.ids.size(); ++c) {
        std::size_t gain = p_.col_bits[c].count_and(uncovered);
        if (gain > best_gain) {
          best_gain = gain;
          best = c;
        }
      }
      uncovered.subtract(p_.col_bits[best]);
      ++size;
    }
    return size;
  }

  std::size_t optimum() {
    Bits all = everything();
    return value(all, greedy(all) + 1);
  }

  // Optima in lexicographic order, at most `limit`.
  void enumerate(std::size_t limit, std::vector<std::vector<std::size_t>>& out) {
    Bits all = everything();
    std::vector<std::size_t> chosen;
    descend(all, optimum(), 0, chosen, limit, out);
  }

 private:
  struct Memo {
    std::size_t value = 0;
    bool exact = false;
  };

  // Picks columns from `pos` on that keep the remaining optimum on track.
  bool descend(const Bits& u, std::size_t need, std::size_t pos,
               std::vector<std::size_t>& chosen, std::size_t limit,
               std::vector<std::vector<std::size_t>>& out) {
    if (need == 0) {
      out.push_back(chosen);
      return out.size() >= limit;
    }
    for (std::size_t c = pos; c < p_.ids.size(); ++c) {
      if (!p_.col_bits[c].intersects(u)) continue;
      Bits rest = u;
      rest.subtract(p_.col_bits[c]);
      if (value(rest, need) != need - 1) continue;
      chosen.push_back(c);
      const bool stop = descend(rest, need - 1, c + 1, chosen, limit, out);
      chosen.pop_back();
      if (stop) return true;
    }
    return false;
  }

  std::size_t value(const Bits& u, std::size_t ub) {
    if (u.none()) return 0;
    if (auto it = memo_.find(u); it != memo_.end()) {
      if (it->second.exact || it->second.value >= ub) return it->second.value;
    }
    ++nodes_;
    std::vector<Bits> parts = split(u);
    std::size_t result;
    bool exact;
    if (parts.size() > 1) {
      std::tie(result, exact) = combine(parts, ub);
    } else {
      std::tie(result, exact) = branch(u, ub);
    }
    Memo& m = memo_[u];
    if (exact || !m.exact) m = {exact ? result : std::max(result, m.value), exact};
    return result;
  }

  std::pair<std::size_t, bool> combine(std::vector<Bits>& parts, std::size_t ub) {
    std::vector<std::size_t> lower(parts.size());
    std::size_t sum_lower = 0;
    for (std::size_t i = 0; i < parts.size(); ++i) {
      lower[i] = lower_bound(parts[i]);
      sum_lower += lower[i];
    }
    if (sum_lower >= ub) return {sum_lower, false};
    // Settle the parts in order; `total` mixes exact values and bounds.
    std::size_t total = sum_lower;
    for (std::size_t i = 0; i < parts.size(); ++i) {
      const std::size_t others = total - lower[i];
      const std::size_t r = value(parts[i], ub - others);
      total = others + r;
      if (total >= ub) return {total, false};
    }
    return {total, true};
  }

  std::pair<std::size_t, bool> branch(const Bits& u, std::size_t ub) {
    const std::size_t lb = lower_bound(u);
    if (lb >= ub) return {lb, false};

    std::size_t tight = 0, tight_size = static_cast<std::size_t>(-1);
    u.for_each([&](std::size_t e) {
      if (p_.elem_cols[e].size() < tight_size) {
        tight_size = p_.elem_cols[e].size();
        tight = e;
      }
    });
    struct Option {
      std::size_t gain;
      std::size_t col;
      Bits rest;
    };
    std::vector<Option> options;
    std::vector<Bits> hit;
    for (std::size_t c : p_.elem_cols[tight]) {
      Bits h = p_.col_bits[c];
      h.intersect(u);
      hit.push_back(std::move(h));
    }
    const auto& cols = p_.elem_cols[tight];
    for (std::size_t i = 0; i < cols.size(); ++i) {
      bool dominated = false;
      for (std::size_t j = 0; j < cols.size() && !dominated; ++j) {
        if (i == j || !hit[i].subset_of(hit[j])) continue;
        dominated = !hit[j].subset_of(hit[i]) || j < i;
      }
      if (dominated) continue;
      Bits rest = u;
      rest.subtract(hit[i]);
      options.push_back({hit[i].count(), cols[i], std::move(rest)});
    }
    std::sort(options.begin(), options.end(), [](const Option& a, const Option& b) {
      return a.gain != b.gain ? a.gain > b.gain : a.col < b.col;
    });

    std::size_t best = ub;
    std::size_t floor = static_cast<std::size_t>(-1);  // min failed bound
    for (const Option& o : options) {
      const std::size_t r = 1 + value(o.rest, best - 1);
      if (r < best) {
        best = r;
        if (best <= lb) break;
      } else {
        floor = std::min(floor, r);
      }
    }
    if (best < ub) return {best, true};
    return {std::max(lb, std::min(floor, ub)), false};
  }

  // Max of a disjoint-support packing and a fractional bound.
  std::size_t lower_bound(const Bits& u) {
    std::vector<std::pair<std::size_t, std::size_t>> order;
    u.for_each([&](std::size_t e) { order.emplace_back(p_.elem_cols[e].size(), e); });
    std::sort(order.begin(), order.end());
    ++clock_;
    std::size_t packing = 0;
    for (const auto& [size, e] : order) {
      (void)size;
      const auto& cols = p_.elem_cols[e];
      if (std::any_of(cols.begin(), cols.end(),
                      [&](std::size_t c) { return stamp_[c] == clock_; })) {
        continue;
      }
      ++packing;
      for (std::size_t c : cols) stamp_[c] = clock_;
    }

    gain_.assign(p_.ids.size(), 0);
    for (std::size_t c = 0; c < p_.ids.size(); ++c) gain_[c] = p_.col_bits[c].count_and(u);
    double fractional = 0.0;
    for (const auto& [size, e] : order) {
      (void)size;
      std::size_t widest = 1;
      for (std::size_t c : p_.elem_cols[e]) widest = std::max(widest, gain_[c]);
      fractional += 1.0 / static_cast<double>(widest);
    }
    const auto frac = static_cast<std::size_t>(std::ceil(fractional - 1e-9));
    return std::max(packing, frac);
  }

  std::vector<Bits> split(const Bits& u) {
    std::vector<std::size_t> elems;
    u.for_each([&](std::size_t e) { elems.push_back(e); });
    if (parent_.size() < p_.elem_count) parent_.resize(p_.elem_count);
    for (std::size_t e : elems) parent_[e] = e;
    auto find = [&](std::size_t x) {
      while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
      return x;
    };
    ++clock_;
    for (std::size_t e : elems) {
      for (std::size_t c : p_.elem_cols[e]) {
        if (stamp_[c] == clock_) continue;
        stamp_[c] = clock_;
        std::size_t root = find(e);
        p_.col_bits[c].for_each_and(u, [&](std::size_t f) {
          std::size_t r = find(f);
          if (r != root) parent_[r] = root;
        });
      }
    }
    std::vector<Bits> parts;
    std::map<std::size_t, std::size_t> index;
    for (std::size_t e : elems) {
      auto [it, inserted] = index.emplace(find(e), parts.size());
      if (inserted) parts.emplace_back(p_.elem_count);
      parts[it->second].set(e);
    }
    return parts;
  }

  const Component& p_;
  std::vector<unsigned> stamp_;
  unsigned clock_ = 0;
  std::vector<std::size_t> gain_;
  std::vector<std::size_t> parent_;
  std::unordered_map<Bits, Memo, BitsHash> memo_;
  std::uint64_t nodes_ = 0;
};

void require_feasible(const SetCoverInstance& sc) {
  FeasibilityReport report = check_feasible(sc);
  if (!report.feasible()) throw Infeasible(std::move(report));
}

std::vector<std::size_t> greedy_cover(const Component& p) {
  Bits uncovered(p.elem_count);
  for (std::size_t e = 0; e < p.elem_count; ++e) uncovered.set(e);
  std::vector<std::size_t> cover;
  while (!uncovered.none()) {
    std::size_t best = 0, best_gain = 0;
    for (std::size_t c = 0; c < p.ids.size(); ++c) {
      const std::size_t gain = p.col_bits[c].count_and(uncovered);
      if (gain > best_gain) {
        best_gain = gain;
        best = c;
      }
    }
    uncovered.subtract(p.col_bits[best]);
    cover.push_back(best);
  }
  return cover;
}

// Optima of one component in lexicographic order, at most `limit`; with
// TieBreak::Any a single optimum of no particular order.
std::vector<std::vector<std::size_t>> component_optima(const Component& comp,
                                                       std::size_t limit,
                                                       TieBreak tie_break,
                                                       std::uint64_t& nodes) {
  std::vector<std::vector<std::size_t>> out;
  if (comp.ids.size() <= kLpColumns) {
    Search search(comp);
    search.enumerate(limit, out);
    nodes += search.nodes();
    return out;
  }
  detail::CoverBranchAndCut bc(comp.ids.size(), comp.elem_cols);
  const std::size_t size = bc.minimum(greedy_cover(comp));
  if (tie_break == TieBreak::Any) {
    out.push_back(bc.incumbent());
  } else {
    bc.enumerate(size, [&](const std::vector<std::size_t>& cover) {
      out.push_back(cover);
      return out.size() >= limit;
    });
  }
  nodes += bc.nodes();
  return out;
}

}  // namespace

Solution solve_exact(const SetCoverInstance& sc, const ExactOptions& options) {
  const auto start = Clock::now();
  require_feasible(sc);
  Reduced r = preprocess(sc, /*dedupe_columns=*/true, /*split=*/true);

  Solution sol;
  sol.optimal = true;
  for (std::size_t c : r.forced) sol.selected.push_back(sc.candidate_ids[c]);
  for (const Component& comp : r.components) {
    const auto optima = component_optima(comp, 1, options.tie_break, sol.stats.nodes);
    for (std::size_t c : optima.front()) sol.selected.push_back(comp.ids[c]);
  }
  std::sort(sol.selected.begin(), sol.selected.end());
  sol.stats.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return sol;
}

std::vector<std::vector<NodeId>> enumerate_optima(const SetCoverInstance& sc,
                                                  std::size_t limit) {
  if (limit == 0) return {};
  require_feasible(sc);
  Reduced r = preprocess(sc, /*dedupe_columns=*/false, /*split=*/false);
  std::vector<NodeId> forced;
  for (std::size_t c : r.forced) forced.push_back(sc.candidate_ids[c]);
  std::sort(forced.begin(), forced.end());
  if (r.components.empty()) return {forced};
  const Component& comp = r.components.front();
  std::uint64_t nodes = 0;
  const auto covers = component_optima(comp, limit, TieBreak::Lexicographic, nodes);
  std::vector<std::vector<NodeId>> out;
  for (const auto& cover : covers) {
    std::vector<NodeId> ids(forced);
    for (std::size_t c : cover) ids.push_back(comp.ids[c]);
    std::sort(ids.begin(), ids.end());
    out.push_back(std::move(ids));
  }
  // Forced columns may be interleaved with free ones in id order.
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace gridcode

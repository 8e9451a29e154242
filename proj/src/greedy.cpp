#include <algorithm>
#include <chrono>
#include <numeric>

#include "gridcode/solver.hpp"

namespace gridcode {

namespace {
using Clock = std::chrono::steady_clock;

double since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}
}  // namespace

Solution solve_greedy(const SetCoverInstance& sc) {
  const auto start = Clock::now();
  FeasibilityReport report = check_feasible(sc);
  if (!report.feasible()) throw Infeasible(std::move(report));

  std::vector<char> covered(sc.universe.size(), 0);
  std::size_t remaining = sc.universe.size();
  std::vector<char> taken(sc.columns.size(), 0);
  Solution sol;
  while (remaining > 0) {
    std::size_t best = sc.columns.size(), best_gain = 0;
    for (std::size_t c = 0; c < sc.columns.size(); ++c) {
      if (taken[c]) continue;
      std::size_t gain = 0;
      for (std::size_t e : sc.columns[c]) gain += !covered[e];
      if (gain > best_gain ||
          (gain == best_gain && gain > 0 && sc.candidate_ids[c] < sc.candidate_ids[best])) {
        best_gain = gain;
        best = c;
      }
    }
    ++sol.stats.nodes;
    taken[best] = 1;
    for (std::size_t e : sc.columns[best]) {
      if (!covered[e]) {
        covered[e] = 1;
        --remaining;
      }
    }
    sol.selected.push_back(sc.candidate_ids[best]);
  }
  std::sort(sol.selected.begin(), sol.selected.end());
  sol.optimal = false;
  sol.stats.seconds = since(start);
  return sol;
}

Solution solve_bruteforce(const SetCoverInstance& sc, std::size_t cap) {
  const auto start = Clock::now();
  std::vector<std::size_t> live;
  for (std::size_t c = 0; c < sc.columns.size(); ++c) {
    if (!sc.columns[c].empty()) live.push_back(c);
  }
  if (live.size() > cap) {
    throw TooLarge(std::to_string(live.size()) + " non-empty columns exceed the cap of " +
                   std::to_string(cap));
  }
  std::sort(live.begin(), live.end(), [&](std::size_t a, std::size_t b) {
    return sc.candidate_ids[a] < sc.candidate_ids[b];
  });

  const std::size_t n = live.size();
  const std::size_t universe = sc.universe.size();
  Solution sol;
  sol.optimal = true;
  std::vector<std::size_t> pick;
  std::vector<unsigned> hits(universe, 0);
  for (std::size_t size = 0; size <= n; ++size) {
    // Combinations of `size` out of n in lexicographic index order.
    pick.resize(size);
    std::iota(pick.begin(), pick.end(), 0);
    while (true) {
      ++sol.stats.nodes;
      std::fill(hits.begin(), hits.end(), 0);
      for (std::size_t i : pick) {
        for (std::size_t e : sc.columns[live[i]]) hits[e] = 1;
      }
      if (std::all_of(hits.begin(), hits.end(), [](unsigned h) { return h != 0; })) {
        for (std::size_t i : pick) sol.selected.push_back(sc.candidate_ids[live[i]]);
        sol.stats.seconds = since(start);
        return sol;
      }
      std::size_t i = size;
      while (i > 0 && pick[i - 1] == n - size + (i - 1)) --i;
      if (i == 0) break;
      ++pick[i - 1];
      for (std::size_t j = i; j < size; ++j) pick[j] = pick[j - 1] + 1;
    }
  }
  throw Infeasible(check_feasible(sc));
}

}  // namespace gridcode

#pragma once

// Shared helpers for the unit tests: seeded random instances and oracles
// that work on the bipartite graph directly, independent of the reduction.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "gridcode/graph.hpp"
#include "gridcode/ingest.hpp"

namespace testing {

using gridcode::Candidate;
using gridcode::MonitorInstance;
using gridcode::NodeId;
using gridcode::Target;

// Targets 1..targets, candidates 101..100+candidates, each edge present
// with probability `density`.
inline MonitorInstance random_instance(std::uint64_t seed, std::size_t targets,
                                       std::size_t candidates, double density) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution edge(density);
  std::vector<Target> ts;
  std::vector<Candidate> cs;
  std::vector<std::vector<NodeId>> obs(targets);
  for (std::size_t t = 0; t < targets; ++t) {
    ts.push_back({static_cast<NodeId>(t + 1), "T" + std::to_string(t + 1)});
  }
  for (std::size_t c = 0; c < candidates; ++c) {
    const NodeId id = static_cast<NodeId>(101 + c);
    cs.push_back({id, 0, id});
    for (std::size_t t = 0; t < targets; ++t) {
      if (edge(rng)) obs[t].push_back(id);
    }
  }
  return MonitorInstance(ts, cs, obs, 1);
}

// Seeded instance shape within the oracle scale: |V1| <= 6, |V2| <= 12,
// density in [0.2, 0.8].
inline MonitorInstance oracle_instance(std::uint64_t seed) {
  std::mt19937_64 rng(seed * 7919 + 17);
  const std::size_t targets = std::uniform_int_distribution<std::size_t>(1, 6)(rng);
  const std::size_t candidates = std::uniform_int_distribution<std::size_t>(1, 12)(rng);
  const double density = std::uniform_real_distribution<double>(0.2, 0.8)(rng);
  return random_instance(seed, targets, candidates, density);
}

// Discriminating-code check straight from the definition.
inline bool is_code(const MonitorInstance& m, const std::vector<NodeId>& chosen) {
  const std::set<NodeId> s(chosen.begin(), chosen.end());
  std::set<std::set<NodeId>> seen;
  for (const auto& obs : m.observers()) {
    std::set<NodeId> trace;
    for (NodeId c : obs) {
      if (s.count(c)) trace.insert(c);
    }
    if (trace.empty() || !seen.insert(trace).second) return false;
  }
  return true;
}

// Smallest code size by enumerating all subsets; -1 when none exists.
inline int oracle_minimum(const MonitorInstance& m) {
  const auto& cs = m.candidates();
  const std::size_t n = cs.size();
  int best = -1;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    const int size = std::popcount(mask);
    if (best >= 0 && size >= best) continue;
    std::vector<NodeId> chosen;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask >> i & 1) chosen.push_back(cs[i].id);
    }
    if (is_code(m, chosen)) best = size;
  }
  return best;
}

}  // namespace testing

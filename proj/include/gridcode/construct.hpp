#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "gridcode/graph.hpp"

namespace gridcode {

// A candidate sensor location: one end of a branch, next to its host bus.
using SensorSite = Candidate;

enum class ReachMetric {
  // Hop count in the construction graph from the transformer node to the
  // site's host bus; reach when distance <= k.
  NodeDistance,
  // Bus-graph hop count (transformers as bus-bus edges) from the nearer
  // terminal bus to the host bus; reach when distance <= k - 1.
  BusDistance,
};

ReachMetric parse_reach_metric(std::string_view text);  // "node" | "bus"
std::string to_string(ReachMetric metric);

struct ReachRule {
  int k = 1;
  ReachMetric metric = ReachMetric::NodeDistance;
  // Permits k outside {1, 2}.
  bool allow_any_k = false;
};

// Two sites per branch record. Sites are grouped by host bus (ascending),
// then by branch in (from, to, row) order; ids run from
// transformer_count + 1 so that targets and sites share one id space
// (targets 1..n, sites n+1..).
std::vector<SensorSite> enumerate_sites(const GridGraph& g);

// Hop distance from transformer `t` to `bus` under `metric`, or -1 when
// unreachable. Under BusDistance a terminal bus is at distance 1.
int reach_distance(const GridGraph& g, const Transformer& t, NodeId bus,
                   ReachMetric metric);

// Targets are the transformers (ids 1..n, names T1..Tn). Throws ConfigError
// when k is outside {1, 2} and the override is not set.
MonitorInstance build_monitor(const GridGraph& g,
                              const std::vector<SensorSite>& sites,
                              const ReachRule& rule);

// Identifying-code instance of a plain graph: every node is both a target
// and a candidate, and observes its closed neighborhood.
MonitorInstance build_ics_instance(const SimpleGraph& g);

std::string write_monitor(const MonitorInstance& m);
MonitorInstance read_monitor(std::string_view text);

inline constexpr int kMonitorSchemaVersion = 1;

}  // namespace gridcode

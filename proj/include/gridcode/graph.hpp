#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace gridcode {

using NodeId = std::int64_t;
using NodeSet = std::set<NodeId>;

// Undirected simple graph over caller-chosen integer ids. Node order is
// insertion order.
class SimpleGraph {
 public:
  SimpleGraph() = default;

  // Throws SchemaError on duplicate node ids.
  void add_node(NodeId id);
  // Throws SchemaError on self-loops or unknown endpoints. Adding an
  // existing edge again is a no-op.
  void add_edge(NodeId a, NodeId b);

  bool has_node(NodeId id) const { return index_.count(id) != 0; }
  const std::vector<NodeId>& nodes() const { return nodes_; }
  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  // Unordered pairs stored as (min, max).
  const std::set<std::pair<NodeId, NodeId>>& edges() const { return edges_; }

  // Dense index of a node (insertion order). Throws NotFound.
  std::size_t index_of(NodeId id) const;
  const std::vector<std::size_t>& adjacent_indices(std::size_t index) const {
    return adjacency_[index];
  }

 private:
  std::vector<NodeId> nodes_;
  std::unordered_map<NodeId, std::size_t> index_;
  std::vector<std::vector<std::size_t>> adjacency_;
  std::set<std::pair<NodeId, NodeId>> edges_;
};

// Open neighborhood N(v). Throws NotFound for unknown v.
NodeSet neighbors(const SimpleGraph& g, NodeId v);
// N(v) plus v itself.
NodeSet closed_neighbors(const SimpleGraph& g, NodeId v);
// Nodes at hop distance 1..k from source (source excluded).
NodeSet khop(const SimpleGraph& g, NodeId source, int k);
// Breadth-first hop distances from source, truncated at max_hops
// (negative means unbounded). Includes source at distance 0.
std::map<NodeId, int> hop_distances(const SimpleGraph& g, NodeId source,
                                    int max_hops = -1);

struct Bus {
  NodeId id = 0;
  std::string name;

  friend bool operator==(const Bus&, const Bus&) = default;
};

struct Line {
  std::int64_t branch = 0;  // source branch row (1-based)
  NodeId from = 0;
  NodeId to = 0;

  friend bool operator==(const Line&, const Line&) = default;
};

struct Transformer {
  NodeId id = 0;            // node id, offset above the largest bus id
  std::string name;         // "T1", "T2", ... in branch order
  std::int64_t branch = 0;  // source branch row (1-based)
  NodeId from = 0;
  NodeId to = 0;

  friend bool operator==(const Transformer&, const Transformer&) = default;
};

// Construction graph of a grid: buses and transformers are nodes, a line
// joins its two buses directly, a transformer node is joined to its two
// terminal buses. Immutable once built.
class GridGraph {
 public:
  GridGraph() = default;
  // Validates all invariants; throws SchemaError on violation.
  GridGraph(std::string name, std::vector<Bus> buses, std::vector<Line> lines,
            std::vector<Transformer> transformers);

  const std::string& name() const { return name_; }
  const std::vector<Bus>& buses() const { return buses_; }
  const std::vector<Line>& lines() const { return lines_; }
  const std::vector<Transformer>& transformers() const { return transformers_; }

  bool is_bus(NodeId id) const;
  bool is_transformer(NodeId id) const;
  const Transformer& transformer(NodeId id) const;

  // Buses + transformer nodes. Parallel lines collapse into one edge here;
  // the branch records in lines() stay distinct.
  const SimpleGraph& topology() const { return topology_; }
  // Buses only; every branch (line or transformer) is a bus-bus edge.
  const SimpleGraph& bus_topology() const { return bus_topology_; }

  // Number of branch records (lines + transformers).
  std::size_t branch_count() const {
    return lines_.size() + transformers_.size();
  }

  friend bool operator==(const GridGraph& a, const GridGraph& b) {
    return a.name_ == b.name_ && a.buses_ == b.buses_ && a.lines_ == b.lines_ &&
           a.transformers_ == b.transformers_;
  }

 private:
  std::string name_;
  std::vector<Bus> buses_;
  std::vector<Line> lines_;
  std::vector<Transformer> transformers_;
  std::unordered_map<NodeId, std::size_t> transformer_index_;
  SimpleGraph topology_;
  SimpleGraph bus_topology_;
};

NodeSet neighbors(const GridGraph& g, NodeId v);
NodeSet khop(const GridGraph& g, NodeId source, int k);

struct Target {
  NodeId id = 0;
  std::string name;

  friend bool operator==(const Target&, const Target&) = default;
};

struct Candidate {
  NodeId id = 0;
  std::int64_t branch = 0;  // 0 when the candidate is not a branch end
  NodeId host = 0;          // host bus, or the graph node for ICS instances

  friend bool operator==(const Candidate&, const Candidate&) = default;
};

// Bipartite monitoring graph: targets (V1) against candidate sensor sites
// (V2). observers[i] is the sorted id list of candidates observing
// targets[i].
class MonitorInstance {
 public:
  MonitorInstance() = default;
  // Throws SchemaError when ids repeat or an observer is not a candidate.
  MonitorInstance(std::vector<Target> targets, std::vector<Candidate> candidates,
                  std::vector<std::vector<NodeId>> observers, int k,
                  std::string metric = {});

  const std::vector<Target>& targets() const { return targets_; }
  const std::vector<Candidate>& candidates() const { return candidates_; }
  const std::vector<std::vector<NodeId>>& observers() const {
    return observers_;
  }
  const std::vector<NodeId>& observers_of(std::size_t target_index) const {
    return observers_[target_index];
  }
  int k() const { return k_; }
  const std::string& metric() const { return metric_; }

  bool has_candidate(NodeId id) const { return candidate_index_.count(id); }
  // Throws NotFound.
  std::size_t candidate_index(NodeId id) const;
  std::size_t target_index(NodeId id) const;

  // Candidates that observe at least one target, in candidate order.
  std::vector<NodeId> viable_candidates() const;
  std::size_t edge_count() const;

  friend bool operator==(const MonitorInstance& a, const MonitorInstance& b) {
    return a.targets_ == b.targets_ && a.candidates_ == b.candidates_ &&
           a.observers_ == b.observers_ && a.k_ == b.k_ &&
           a.metric_ == b.metric_;
  }

 private:
  std::vector<Target> targets_;
  std::vector<Candidate> candidates_;
  std::vector<std::vector<NodeId>> observers_;
  int k_ = 0;
  std::string metric_;
  std::unordered_map<NodeId, std::size_t> candidate_index_;
  std::unordered_map<NodeId, std::size_t> target_index_;
};

}  // namespace gridcode

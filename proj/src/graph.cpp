#include "gridcode/graph.hpp"

#include <algorithm>
#include <deque>

#include "gridcode/errors.hpp"

namespace gridcode {

void SimpleGraph::add_node(NodeId id) {
  if (index_.count(id)) {
    throw SchemaError("duplicate node id " + std::to_string(id));
  }
  index_.emplace(id, nodes_.size());
  nodes_.push_back(id);
  adjacency_.emplace_back();
}

void SimpleGraph::add_edge(NodeId a, NodeId b) {
  if (a == b) throw SchemaError("self-loop at node " + std::to_string(a));
  auto ia = index_.find(a);
  auto ib = index_.find(b);
  if (ia == index_.end() || ib == index_.end()) {
    throw SchemaError("edge endpoint " + std::to_string(ia == index_.end() ? a : b) +
                      " is not a node");
  }
  auto key = std::minmax(a, b);
  if (!edges_.emplace(key.first, key.second).second) return;
  auto insert_sorted = [](std::vector<std::size_t>& list, std::size_t v) {
    list.insert(std::lower_bound(list.begin(), list.end(), v), v);
  };
  insert_sorted(adjacency_[ia->second], ib->second);
  insert_sorted(adjacency_[ib->second], ia->second);
}

std::size_t SimpleGraph::index_of(NodeId id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw NotFound("unknown node id " + std::to_string(id));
  return it->second;
}

NodeSet neighbors(const SimpleGraph& g, NodeId v) {
  NodeSet out;
  for (std::size_t i : g.adjacent_indices(g.index_of(v))) out.insert(g.nodes()[i]);
  return out;
}

NodeSet closed_neighbors(const SimpleGraph& g, NodeId v) {
  NodeSet out = neighbors(g, v);
  out.insert(v);
  return out;
}

std::map<NodeId, int> hop_distances(const SimpleGraph& g, NodeId source,
                                    int max_hops) {
  const std::size_t start = g.index_of(source);
  std::vector<int> dist(g.node_count(), -1);
  std::deque<std::size_t> queue{start};
  dist[start] = 0;
  while (!queue.empty()) {
    std::size_t u = queue.front();
    queue.pop_front();
    if (max_hops >= 0 && dist[u] >= max_hops) continue;
    for (std::size_t w : g.adjacent_indices(u)) {
      if (dist[w] < 0) {
        dist[w] = dist[u] + 1;
        queue.push_back(w);
      }
    }
  }
  std::map<NodeId, int> out;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    if (dist[i] >= 0) out.emplace(g.nodes()[i], dist[i]);
  }
  return out;
}

NodeSet khop(const SimpleGraph& g, NodeId source, int k) {
  if (k < 0) throw ConfigError("hop radius must be non-negative");
  NodeSet out;
  for (const auto& [node, d] : hop_distances(g, source, k)) {
    if (node != source) out.insert(node);
  }
  return out;
}

GridGraph::GridGraph(std::string name, std::vector<Bus> buses,
                     std::vector<Line> lines,
                     std::vector<Transformer> transformers)
    : name_(std::move(name)),
      buses_(std::move(buses)),
      lines_(std::move(lines)),
      transformers_(std::move(transformers)) {
  for (const Bus& b : buses_) {
    topology_.add_node(b.id);
    bus_topology_.add_node(b.id);
  }
  auto require_bus = [&](NodeId id, const std::string& what) {
    if (!bus_topology_.has_node(id)) {
      throw SchemaError(what + " references undeclared bus " + std::to_string(id));
    }
  };
  for (const Transformer& t : transformers_) {
    if (bus_topology_.has_node(t.id)) {
      throw SchemaError("transformer id " + std::to_string(t.id) +
                        " collides with a bus id");
    }
    require_bus(t.from, "transformer " + t.name);
    require_bus(t.to, "transformer " + t.name);
    if (t.from == t.to) {
      throw SchemaError("transformer " + t.name + " has identical terminals");
    }
    topology_.add_node(t.id);  // throws on duplicate transformer ids
    transformer_index_.emplace(t.id, &t - transformers_.data());
  }
  for (const Line& l : lines_) {
    const std::string what = "line at branch " + std::to_string(l.branch);
    require_bus(l.from, what);
    require_bus(l.to, what);
    if (l.from == l.to) throw SchemaError(what + " is a self-loop");
    topology_.add_edge(l.from, l.to);
    bus_topology_.add_edge(l.from, l.to);
  }
  for (const Transformer& t : transformers_) {
    topology_.add_edge(t.id, t.from);
    topology_.add_edge(t.id, t.to);
    bus_topology_.add_edge(t.from, t.to);
  }
}

bool GridGraph::is_bus(NodeId id) const { return bus_topology_.has_node(id); }

bool GridGraph::is_transformer(NodeId id) const {
  return transformer_index_.count(id) != 0;
}

const Transformer& GridGraph::transformer(NodeId id) const {
  auto it = transformer_index_.find(id);
  if (it == transformer_index_.end()) {
    throw NotFound("unknown transformer id " + std::to_string(id));
  }
  return transformers_[it->second];
}

NodeSet neighbors(const GridGraph& g, NodeId v) {
  return neighbors(g.topology(), v);
}

NodeSet khop(const GridGraph& g, NodeId source, int k) {
  return khop(g.topology(), source, k);
}

MonitorInstance::MonitorInstance(std::vector<Target> targets,
                                 std::vector<Candidate> candidates,
                                 std::vector<std::vector<NodeId>> observers,
                                 int k, std::string metric)
    : targets_(std::move(targets)),
      candidates_(std::move(candidates)),
      observers_(std::move(observers)),
      k_(k),
      metric_(std::move(metric)) {
  if (observers_.size() != targets_.size()) {
    throw SchemaError("observer lists must match the target count");
  }
  for (std::size_t i = 0; i < candidates_.size(); ++i) {
    if (!candidate_index_.emplace(candidates_[i].id, i).second) {
      throw SchemaError("duplicate candidate id " +
                        std::to_string(candidates_[i].id));
    }
  }
  for (std::size_t i = 0; i < targets_.size(); ++i) {
    if (!target_index_.emplace(targets_[i].id, i).second) {
      throw SchemaError("duplicate target id " + std::to_string(targets_[i].id));
    }
    auto& obs = observers_[i];
    std::sort(obs.begin(), obs.end());
    obs.erase(std::unique(obs.begin(), obs.end()), obs.end());
    for (NodeId c : obs) {
      if (!candidate_index_.count(c)) {
        throw SchemaError("target " + targets_[i].name +
                          " lists undeclared candidate " + std::to_string(c));
      }
    }
  }
}

std::size_t MonitorInstance::candidate_index(NodeId id) const {
  auto it = candidate_index_.find(id);
  if (it == candidate_index_.end()) {
    throw NotFound("unknown candidate id " + std::to_string(id));
  }
  return it->second;
}

std::size_t MonitorInstance::target_index(NodeId id) const {
  auto it = target_index_.find(id);
  if (it == target_index_.end()) {
    throw NotFound("unknown target id " + std::to_string(id));
  }
  return it->second;
}

std::vector<NodeId> MonitorInstance::viable_candidates() const {
  std::vector<char> seen(candidates_.size(), 0);
  for (const auto& obs : observers_) {
    for (NodeId c : obs) seen[candidate_index_.at(c)] = 1;
  }
  std::vector<NodeId> out;
  for (std::size_t i = 0; i < candidates_.size(); ++i) {
    if (seen[i]) out.push_back(candidates_[i].id);
  }
  return out;
}

std::size_t MonitorInstance::edge_count() const {
  std::size_t n = 0;
  for (const auto& obs : observers_) n += obs.size();
  return n;
}

}  // namespace gridcode

#include "gridcode/construct.hpp"

#include <algorithm>
#include <map>
#include <tuple>

#include <json.hpp>

#include "gridcode/errors.hpp"

namespace gridcode {

namespace {

using nlohmann::json;

struct BranchRef {
  std::int64_t branch;
  NodeId from;
  NodeId to;
};

std::vector<BranchRef> branches_in_order(const GridGraph& g) {
  std::vector<BranchRef> out;
  for (const Line& l : g.lines()) out.push_back({l.branch, l.from, l.to});
  for (const Transformer& t : g.transformers()) {
    out.push_back({t.branch, t.from, t.to});
  }
  std::sort(out.begin(), out.end(), [](const BranchRef& a, const BranchRef& b) {
    return std::tie(a.from, a.to, a.branch) < std::tie(b.from, b.to, b.branch);
  });
  return out;
}

}  // namespace

ReachMetric parse_reach_metric(std::string_view text) {
  if (text == "node" || text == "node-distance") return ReachMetric::NodeDistance;
  if (text == "bus" || text == "bus-distance") return ReachMetric::BusDistance;
  throw ConfigError("unknown reach metric '" + std::string(text) + "'");
}

std::string to_string(ReachMetric metric) {
  return metric == ReachMetric::NodeDistance ? "node" : "bus";
}

std::vector<SensorSite> enumerate_sites(const GridGraph& g) {
  std::map<NodeId, std::vector<std::int64_t>> by_host;
  for (const BranchRef& b : branches_in_order(g)) {
    by_host[b.from].push_back(b.branch);
    by_host[b.to].push_back(b.branch);
  }
  std::vector<SensorSite> sites;
  NodeId next = static_cast<NodeId>(g.transformers().size()) + 1;
  for (const auto& [host, branches] : by_host) {
    for (std::int64_t br : branches) sites.push_back({next++, br, host});
  }
  return sites;
}

int reach_distance(const GridGraph& g, const Transformer& t, NodeId bus,
                   ReachMetric metric) {
  if (metric == ReachMetric::NodeDistance) {
    auto d = hop_distances(g.topology(), t.id);
    auto it = d.find(bus);
    return it == d.end() ? -1 : it->second;
  }
  int best = -1;
  for (NodeId terminal : {t.from, t.to}) {
    auto d = hop_distances(g.bus_topology(), terminal);
    auto it = d.find(bus);
    if (it != d.end() && (best < 0 || it->second + 1 < best)) best = it->second + 1;
  }
  return best;
}

MonitorInstance build_monitor(const GridGraph& g,
                              const std::vector<SensorSite>& sites,
                              const ReachRule& rule) {
  if (rule.k < 0 || (!rule.allow_any_k && rule.k != 1 && rule.k != 2)) {
    throw ConfigError("hop radius k must be 1 or 2 (got " + std::to_string(rule.k) +
                      ")");
  }
  std::map<NodeId, std::vector<NodeId>> sites_at;
  for (const SensorSite& s : sites) {
    if (!g.is_bus(s.host)) {
      throw SchemaError("site " + std::to_string(s.id) + " has unknown host bus " +
                        std::to_string(s.host));
    }
    sites_at[s.host].push_back(s.id);
  }

  std::vector<Target> targets;
  std::vector<std::vector<NodeId>> observers;
  for (std::size_t i = 0; i < g.transformers().size(); ++i) {
    const Transformer& t = g.transformers()[i];
    targets.push_back({static_cast<NodeId>(i + 1), t.name});
    NodeSet reached;
    if (rule.metric == ReachMetric::NodeDistance) {
      for (const auto& [node, d] : hop_distances(g.topology(), t.id, rule.k)) {
        (void)d;
        if (g.is_bus(node)) reached.insert(node);
      }
    } else if (rule.k >= 1) {
      for (NodeId terminal : {t.from, t.to}) {
        for (const auto& [node, d] :
             hop_distances(g.bus_topology(), terminal, rule.k - 1)) {
          (void)d;
          reached.insert(node);
        }
      }
    }
    std::vector<NodeId> obs;
    for (NodeId bus : reached) {
      auto it = sites_at.find(bus);
      if (it != sites_at.end()) obs.insert(obs.end(), it->second.begin(), it->second.end());
    }
    observers.push_back(std::move(obs));
  }
  return MonitorInstance(std::move(targets), sites, std::move(observers), rule.k,
                         to_string(rule.metric));
}

MonitorInstance build_ics_instance(const SimpleGraph& g) {
  std::vector<Target> targets;
  std::vector<Candidate> candidates;
  std::vector<std::vector<NodeId>> observers;
  for (NodeId v : g.nodes()) {
    targets.push_back({v, "v" + std::to_string(v)});
    candidates.push_back({v, 0, v});
    NodeSet closed = closed_neighbors(g, v);
    observers.emplace_back(closed.begin(), closed.end());
  }
  return MonitorInstance(std::move(targets), std::move(candidates),
                         std::move(observers), 1, "closed-neighborhood");
}

std::string write_monitor(const MonitorInstance& m) {
  json doc;
  doc["schema_version"] = kMonitorSchemaVersion;
  doc["k"] = m.k();
  doc["metric"] = m.metric();
  json candidates = json::array();
  for (const Candidate& c : m.candidates()) {
    candidates.push_back({{"id", c.id}, {"branch", c.branch}, {"host", c.host}});
  }
  json targets = json::array();
  for (std::size_t i = 0; i < m.targets().size(); ++i) {
    targets.push_back({{"id", m.targets()[i].id},
                       {"name", m.targets()[i].name},
                       {"observers", m.observers_of(i)}});
  }
  doc["candidates"] = std::move(candidates);
  doc["targets"] = std::move(targets);
  return doc.dump(2) + "\n";
}

MonitorInstance read_monitor(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed monitor document: ") + e.what());
  }
  try {
    if (!doc.is_object()) throw ParseError("monitor document must be an object");
    for (const auto& item : doc.items()) {
      const auto& key = item.key();
      if (key != "schema_version" && key != "k" && key != "metric" &&
          key != "candidates" && key != "targets") {
        throw ParseError("unknown field '" + key + "' in monitor document");
      }
    }
    if (doc.at("schema_version").get<int>() != kMonitorSchemaVersion) {
      throw ParseError("unsupported monitor schema version");
    }
    std::vector<Candidate> candidates;
    for (const json& c : doc.at("candidates")) {
      if (c.is_number_integer()) {
        candidates.push_back({c.get<NodeId>(), 0, 0});
      } else {
        candidates.push_back({c.at("id").get<NodeId>(), c.value("branch", std::int64_t{0}),
                              c.value("host", NodeId{0})});
      }
    }
    std::vector<Target> targets;
    std::vector<std::vector<NodeId>> observers;
    for (const json& t : doc.at("targets")) {
      NodeId id = t.at("id").get<NodeId>();
      targets.push_back({id, t.value("name", "T" + std::to_string(id))});
      observers.push_back(t.at("observers").get<std::vector<NodeId>>());
    }
    return MonitorInstance(std::move(targets), std::move(candidates),
                           std::move(observers), doc.value("k", 1),
                           doc.value("metric", std::string{}));
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid monitor document: ") + e.what());
  }
}

}  // namespace gridcode

#include "gridcode/fixtures.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "gridcode/errors.hpp"

#ifndef GRIDCODE_DATA_DIR
#define GRIDCODE_DATA_DIR "data"
#endif

namespace gridcode {

namespace fs = std::filesystem;
using nlohmann::json;

GridGraph Fixture::grid() const { return build_grid(load_case(case_path), rule); }

MonitorInstance Fixture::instance(int k) const {
  GridGraph g = grid();
  return build_monitor(g, enumerate_sites(g), ReachRule{k, metric});
}

std::string default_data_dir() {
  if (const char* env = std::getenv("GRIDCODE_DATA"); env && *env) return env;
  return GRIDCODE_DATA_DIR;
}

SimpleGraph ics_example_graph() {
  SimpleGraph g;
  for (NodeId v = 1; v <= 10; ++v) g.add_node(v);
  NodeId next = 5;
  for (NodeId a = 1; a <= 4; ++a) {
    for (NodeId b = a + 1; b <= 4; ++b) {
      g.add_edge(next, a);
      g.add_edge(next, b);
      ++next;
    }
  }
  return g;
}

std::vector<Fixture> load_fixtures(const std::string& data_dir) {
  const fs::path manifest = fs::path(data_dir) / "fixtures.json";
  std::ifstream in(manifest);
  if (!in) throw ConfigError("fixture manifest not found: " + manifest.string());
  std::vector<Fixture> out;
  try {
    json doc = json::parse(in);
    for (const json& f : doc.at("fixtures")) {
      Fixture fx;
      fx.name = f.at("name").get<std::string>();
      fx.title = f.value("title", fx.name);
      fx.case_path = (fs::path(data_dir) / f.at("case").get<std::string>()).string();
      fx.rule.mode = parse_transformer_mode(f.at("rule").get<std::string>());
      if (f.contains("rows")) fx.rule.rows = f.at("rows").get<std::vector<std::int64_t>>();
      fx.metric = parse_reach_metric(f.value("reach_metric", std::string("bus")));
      if (f.contains("reference")) {
        const json& r = f.at("reference");
        fx.reference = {r.at("transformers").get<std::size_t>(), r.at("k1").get<std::size_t>(),
                        r.at("k2").get<std::size_t>()};
      }
      out.push_back(std::move(fx));
    }
  } catch (const json::exception& e) {
    throw ConfigError("malformed fixture manifest " + manifest.string() + ": " + e.what());
  }
  if (out.empty()) throw ConfigError("fixture manifest lists no fixtures");
  return out;
}

Fixture find_fixture(const std::string& name, const std::string& data_dir) {
  for (Fixture& f : load_fixtures(data_dir)) {
    if (f.name == name) return f;
  }
  throw NotFound("no bundled fixture named '" + name + "'");
}

}  // namespace gridcode

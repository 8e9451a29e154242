#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gridcode/construct.hpp"
#include "gridcode/graph.hpp"
#include "gridcode/ingest.hpp"

namespace gridcode {

// Published reference numbers for a bundled system.
struct Reference {
  std::size_t transformers = 0;
  std::size_t k1 = 0;
  std::size_t k2 = 0;
};

struct Fixture {
  std::string name;       // short key, e.g. "ieee14"
  std::string title;      // display name, e.g. "IEEE 14"
  std::string case_path;  // absolute, resolved against the manifest directory
  TransformerRule rule;
  ReachMetric metric = ReachMetric::BusDistance;
  Reference reference;

  GridGraph grid() const;
  MonitorInstance instance(int k) const;
};

// Directory holding fixtures.json: $GRIDCODE_DATA when set, else the
// compiled-in data directory.
std::string default_data_dir();

// Ten-node identifying-code example with nodes 1..10: nodes 1-4 are
// pairwise non-adjacent and each of nodes 5-10 is joined to one distinct
// pair of them, (1,2) (1,3) (1,4) (2,3) (2,4) (3,4) in order. {1, 2, 3, 4}
// is a minimum identifying code.
SimpleGraph ics_example_graph();

// Throws ConfigError when the manifest is missing or malformed.
std::vector<Fixture> load_fixtures(const std::string& data_dir = default_data_dir());
// Throws NotFound.
Fixture find_fixture(const std::string& name,
                     const std::string& data_dir = default_data_dir());

}  // namespace gridcode

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "gridcode/graph.hpp"

namespace gridcode {

struct CaseBus {
  NodeId id = 0;
  double base_kv = 0.0;
};

struct CaseBranch {
  std::int64_t row = 0;  // 1-based row in mpc.branch
  NodeId from = 0;
  NodeId to = 0;
  double tap = 0.0;
  bool in_service = true;
};

struct CaseFile {
  std::string name;
  std::vector<CaseBus> buses;
  std::vector<CaseBranch> branches;
};

// Reads the `mpc.bus` and `mpc.branch` matrices of a MATPOWER case file.
// Everything else (gen, gencost, bus_name, ...) is skipped. `%` starts a
// comment; rows are separated by newlines or `;`.
//
// Throws ParseError (with line/column) for malformed matrices and
// SchemaError for duplicate bus ids, an empty bus table, or branches that
// reference undeclared buses.
CaseFile parse_case(std::string_view text);
CaseFile load_case(const std::string& path);

enum class TransformerMode { TapRatio, VoltageMismatch, ExplicitList };

struct TransformerRule {
  TransformerMode mode = TransformerMode::TapRatio;
  std::vector<std::int64_t> rows;  // ExplicitList only: 1-based branch rows

  static TransformerRule tap_ratio() { return {}; }
  static TransformerRule voltage_mismatch() {
    return {TransformerMode::VoltageMismatch, {}};
  }
  static TransformerRule explicit_list(std::vector<std::int64_t> rows) {
    return {TransformerMode::ExplicitList, std::move(rows)};
  }
};

// "tap-ratio", "voltage-mismatch", "explicit-list". Throws ConfigError.
TransformerMode parse_transformer_mode(std::string_view text);
std::string to_string(TransformerMode mode);

struct BuildOptions {
  // Parallel in-service branches between one bus pair become a single
  // branch record (a transformer when any member is one).
  bool merge_parallel = true;
};

// Out-of-service branches are dropped. Transformers are numbered T1..Tn and
// get node ids max_bus_id+1.. in canonical (from, to, row) order.
// Throws SchemaError for an empty or out-of-range explicit list.
GridGraph build_grid(const CaseFile& c, const TransformerRule& rule,
                     const BuildOptions& options = {});

// Canonical JSON text of a grid; byte-stable for a given graph.
std::string write_grid(const GridGraph& g);
// Throws ParseError for malformed documents, missing sections, unknown
// fields or an unsupported schema version.
GridGraph read_grid(std::string_view text);

inline constexpr int kGridSchemaVersion = 1;

}  // namespace gridcode

#include "gridcode/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <tuple>
#include <unordered_set>

#include <json.hpp>

#include "gridcode/errors.hpp"

namespace gridcode {

namespace {

using nlohmann::json;

// Cursor over the case text that tracks line/column for diagnostics.
class Scanner {
 public:
  explicit Scanner(std::string_view text) : text_(text) {}

  bool done() const { return pos_ >= text_.size(); }
  char peek() const { return done() ? '\0' : text_[pos_]; }
  std::size_t line() const { return line_; }
  std::size_t column() const { return pos_ - line_start_ + 1; }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      line_start_ = pos_ + 1;
    }
    ++pos_;
  }

  void skip_comment() {
    while (!done() && peek() != '\n') advance();
  }

  // Skips blanks and comments but not newlines.
  void skip_inline_space() {
    while (!done()) {
      char c = peek();
      if (c == ' ' || c == '\t' || c == '\r' || c == ',') {
        advance();
      } else if (c == '%') {
        skip_comment();
      } else {
        break;
      }
    }
  }

  std::string_view rest_of_line() const {
    auto end = text_.find('\n', pos_);
    return text_.substr(pos_, end == std::string_view::npos ? std::string_view::npos
                                                             : end - pos_);
  }

  double number() {
    std::size_t start = pos_;
    std::size_t col = column();
    while (!done()) {
      char c = peek();
      if ((c >= '0' && c <= '9') || c == '.' || c == '-' || c == '+' ||
          c == 'e' || c == 'E' || c == 'I' || c == 'n' || c == 'f' ||
          c == 'N' || c == 'a') {
        advance();
      } else {
        break;
      }
    }
    std::string token(text_.substr(start, pos_ - start));
    if (token == "Inf" || token == "inf") return HUGE_VAL;
    if (token == "-Inf" || token == "-inf") return -HUGE_VAL;
    double value = 0.0;
    auto [ptr, ec] =
        std::from_chars(token.data(), token.data() + token.size(), value);
    if (token.empty() || ec != std::errc() || ptr != token.data() + token.size()) {
      throw ParseError(line_, col, "a numeric matrix entry");
    }
    return value;
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t line_start_ = 0;
};

bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.';
}

struct MatrixRow {
  std::size_t line;
  std::vector<double> values;
};

// Reads rows until the closing `]`. The scanner sits just past `[`.
std::vector<MatrixRow> read_matrix(Scanner& s, std::size_t min_columns,
                                   const std::string& what) {
  std::vector<MatrixRow> rows;
  std::vector<double> row;
  std::size_t row_line = s.line();
  auto flush = [&] {
    if (row.empty()) return;
    if (row.size() < min_columns) {
      throw ParseError(row_line, 1,
                       std::to_string(min_columns) + " columns in " + what +
                           " row, got " + std::to_string(row.size()));
    }
    rows.push_back({row_line, std::move(row)});
    row.clear();
  };
  while (true) {
    s.skip_inline_space();
    if (s.done()) throw ParseError(s.line(), s.column(), "']' closing " + what);
    char c = s.peek();
    if (c == ']') {
      s.advance();
      flush();
      return rows;
    }
    if (c == ';' || c == '\n') {
      s.advance();
      flush();
      row_line = s.line();
      continue;
    }
    if (row.empty()) row_line = s.line();
    row.push_back(s.number());
  }
}

void expect_char(Scanner& s, char want, const std::string& expected) {
  s.skip_inline_space();
  if (s.peek() != want) throw ParseError(s.line(), s.column(), expected);
  s.advance();
}

NodeId as_bus_id(double v, std::size_t line, const std::string& what) {
  if (v != std::floor(v) || v < 0 || v > 9.0e15) {
    throw ParseError(line, 1, "an integer " + what);
  }
  return static_cast<NodeId>(v);
}

bool is_transformer(const CaseBranch& b, const std::map<NodeId, double>& kv,
                    const TransformerRule& rule,
                    const std::set<std::int64_t>& listed) {
  switch (rule.mode) {
    case TransformerMode::TapRatio:
      return b.tap != 0.0 && b.tap != 1.0;
    case TransformerMode::VoltageMismatch: {
      double a = kv.at(b.from), c = kv.at(b.to);
      return a > 0.0 && c > 0.0 && a != c;
    }
    case TransformerMode::ExplicitList:
      return listed.count(b.row) != 0;
  }
  return false;
}

void reject_unknown(const json& obj, std::initializer_list<const char*> allowed,
                    const std::string& where) {
  if (!obj.is_object()) throw ParseError(where + " must be an object");
  for (const auto& item : obj.items()) {
    if (std::find_if(allowed.begin(), allowed.end(), [&](const char* a) {
          return item.key() == a;
        }) == allowed.end()) {
      throw ParseError("unknown field '" + item.key() + "' in " + where);
    }
  }
}

const json& require(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw ParseError("missing field '" + std::string(key) + "' in " + where);
  }
  return *it;
}

}  // namespace

CaseFile parse_case(std::string_view text) {
  CaseFile out;
  Scanner s(text);
  bool saw_bus = false, saw_branch = false;

  while (!s.done()) {
    char c = s.peek();
    if (c == '%') {
      s.skip_comment();
      continue;
    }
    if (!is_ident_char(c)) {
      s.advance();
      continue;
    }
    std::string word;
    while (!s.done() && is_ident_char(s.peek())) {
      word += s.peek();
      s.advance();
    }
    if (word == "function" && out.name.empty()) {
      // function mpc = caseNN
      auto line = s.rest_of_line();
      auto eq = line.find('=');
      if (eq != std::string_view::npos) {
        auto name = line.substr(eq + 1);
        auto b = name.find_first_not_of(" \t");
        auto e = name.find_last_not_of(" \t\r;");
        if (b != std::string_view::npos) out.name = std::string(name.substr(b, e - b + 1));
      }
      s.skip_comment();
      continue;
    }
    if (word != "mpc.bus" && word != "mpc.branch") continue;
    const bool is_bus = word == "mpc.bus";
    if ((is_bus && saw_bus) || (!is_bus && saw_branch)) {
      throw ParseError(s.line(), s.column(), "a single " + word + " matrix");
    }
    expect_char(s, '=', "'=' after " + word);
    expect_char(s, '[', "'[' opening " + word);
    auto rows = read_matrix(s, is_bus ? 10 : 11, word);
    if (is_bus) {
      saw_bus = true;
      for (const auto& [line, r] : rows) {
        out.buses.push_back({as_bus_id(r[0], line, "bus id"), r[9]});
      }
    } else {
      saw_branch = true;
      std::int64_t row = 0;
      for (const auto& [line, r] : rows) {
        CaseBranch b;
        b.row = ++row;
        b.from = as_bus_id(r[0], line, "from-bus");
        b.to = as_bus_id(r[1], line, "to-bus");
        b.tap = r[8];
        b.in_service = r[10] != 0.0;
        out.branches.push_back(b);
      }
    }
  }
  if (!saw_bus) throw ParseError(s.line(), s.column(), "an mpc.bus matrix");
  if (!saw_branch) throw ParseError(s.line(), s.column(), "an mpc.branch matrix");
  if (out.buses.empty()) throw SchemaError("case has an empty bus table");

  std::unordered_set<NodeId> ids;
  for (const auto& b : out.buses) {
    if (!ids.insert(b.id).second) {
      throw SchemaError("duplicate bus id " + std::to_string(b.id));
    }
  }
  for (const auto& br : out.branches) {
    for (NodeId end : {br.from, br.to}) {
      if (!ids.count(end)) {
        throw SchemaError("branch row " + std::to_string(br.row) +
                          " references undeclared bus " + std::to_string(end));
      }
    }
  }
  return out;
}

CaseFile load_case(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NotFound("cannot open case file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_case(buf.str());
}

TransformerMode parse_transformer_mode(std::string_view text) {
  if (text == "tap-ratio") return TransformerMode::TapRatio;
  if (text == "voltage-mismatch") return TransformerMode::VoltageMismatch;
  if (text == "explicit-list") return TransformerMode::ExplicitList;
  throw ConfigError("unknown transformer rule '" + std::string(text) + "'");
}

std::string to_string(TransformerMode mode) {
  switch (mode) {
    case TransformerMode::TapRatio:
      return "tap-ratio";
    case TransformerMode::VoltageMismatch:
      return "voltage-mismatch";
    case TransformerMode::ExplicitList:
      return "explicit-list";
  }
  return "?";
}

GridGraph build_grid(const CaseFile& c, const TransformerRule& rule,
                     const BuildOptions& options) {
  std::set<std::int64_t> listed(rule.rows.begin(), rule.rows.end());
  if (rule.mode == TransformerMode::ExplicitList) {
    if (listed.empty()) throw SchemaError("explicit-list rule needs at least one row");
    for (std::int64_t r : listed) {
      if (r < 1 || r > static_cast<std::int64_t>(c.branches.size())) {
        throw SchemaError("explicit-list row " + std::to_string(r) +
                          " is out of range");
      }
    }
  }
  std::map<NodeId, double> kv;
  NodeId max_bus = 0;
  std::vector<Bus> buses;
  for (const auto& b : c.buses) {
    kv.emplace(b.id, b.base_kv);
    max_bus = std::max(max_bus, b.id);
  }
  for (const auto& [id, _] : kv) buses.push_back({id, "Bus " + std::to_string(id)});

  struct Record {
    CaseBranch branch;
    bool transformer;
  };
  std::vector<Record> records;
  for (const auto& b : c.branches) {
    if (!b.in_service) continue;
    records.push_back({b, is_transformer(b, kv, rule, listed)});
  }
  std::sort(records.begin(), records.end(), [](const Record& a, const Record& b) {
    return std::tie(a.branch.from, a.branch.to, a.branch.row) <
           std::tie(b.branch.from, b.branch.to, b.branch.row);
  });

  if (options.merge_parallel) {
    std::map<std::pair<NodeId, NodeId>, std::size_t> first;
    std::vector<Record> merged;
    for (const Record& r : records) {
      auto key = std::minmax(r.branch.from, r.branch.to);
      auto it = first.find(key);
      if (it == first.end()) {
        first.emplace(key, merged.size());
        merged.push_back(r);
      } else if (r.transformer && !merged[it->second].transformer) {
        merged[it->second] = r;
      }
    }
    records = std::move(merged);
    std::sort(records.begin(), records.end(), [](const Record& a, const Record& b) {
      return std::tie(a.branch.from, a.branch.to, a.branch.row) <
             std::tie(b.branch.from, b.branch.to, b.branch.row);
    });
  }

  std::vector<Line> lines;
  std::vector<Transformer> transformers;
  for (const Record& r : records) {
    if (r.transformer) {
      const auto n = static_cast<NodeId>(transformers.size()) + 1;
      transformers.push_back({max_bus + n, "T" + std::to_string(n), r.branch.row,
                              r.branch.from, r.branch.to});
    } else {
      lines.push_back({r.branch.row, r.branch.from, r.branch.to});
    }
  }
  return GridGraph(c.name, std::move(buses), std::move(lines), std::move(transformers));
}

std::string write_grid(const GridGraph& g) {
  json doc;
  doc["schema_version"] = kGridSchemaVersion;
  doc["meta"] = {{"name", g.name()}};
  json buses = json::array();
  for (const Bus& b : g.buses()) buses.push_back({{"id", b.id}, {"name", b.name}});
  json lines = json::array();
  for (const Line& l : g.lines()) {
    lines.push_back({{"branch", l.branch}, {"from", l.from}, {"to", l.to}});
  }
  json transformers = json::array();
  for (const Transformer& t : g.transformers()) {
    transformers.push_back({{"id", t.id},
                            {"name", t.name},
                            {"branch", t.branch},
                            {"from", t.from},
                            {"to", t.to}});
  }
  doc["buses"] = std::move(buses);
  doc["lines"] = std::move(lines);
  doc["transformers"] = std::move(transformers);
  return doc.dump(2) + "\n";
}

GridGraph read_grid(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed grid document: ") + e.what());
  }
  try {
    reject_unknown(doc, {"schema_version", "meta", "buses", "lines", "transformers"},
                   "grid document");
    if (require(doc, "schema_version", "grid document").get<int>() !=
        kGridSchemaVersion) {
      throw ParseError("unsupported grid schema version");
    }
    const json& meta = require(doc, "meta", "grid document");
    reject_unknown(meta, {"name"}, "meta");
    std::string name = meta.value("name", "");

    std::vector<Bus> buses;
    for (const json& b : require(doc, "buses", "grid document")) {
      reject_unknown(b, {"id", "name"}, "bus");
      buses.push_back({require(b, "id", "bus").get<NodeId>(), b.value("name", "")});
    }
    std::vector<Line> lines;
    for (const json& l : require(doc, "lines", "grid document")) {
      reject_unknown(l, {"branch", "from", "to"}, "line");
      lines.push_back({require(l, "branch", "line").get<std::int64_t>(),
                       require(l, "from", "line").get<NodeId>(),
                       require(l, "to", "line").get<NodeId>()});
    }
    std::vector<Transformer> transformers;
    for (const json& t : require(doc, "transformers", "grid document")) {
      reject_unknown(t, {"id", "name", "branch", "from", "to"}, "transformer");
      transformers.push_back({require(t, "id", "transformer").get<NodeId>(),
                              t.value("name", ""),
                              require(t, "branch", "transformer").get<std::int64_t>(),
                              require(t, "from", "transformer").get<NodeId>(),
                              require(t, "to", "transformer").get<NodeId>()});
    }
    return GridGraph(std::move(name), std::move(buses), std::move(lines),
                     std::move(transformers));
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid grid document: ") + e.what());
  }
}

}  // namespace gridcode

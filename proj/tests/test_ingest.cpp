#include <doctest.h>

#include <algorithm>
#include <string>

#include "gridcode/errors.hpp"
#include "gridcode/fixtures.hpp"
#include "gridcode/ingest.hpp"

using namespace gridcode;

namespace {

// Bus rows: id type Pd Qd Gs Bs area Vm Va baseKV zone Vmax Vmin.
// Branch rows: from to r x b rateA rateB rateC ratio angle status angmin angmax.
const char* kTiny = R"(function mpc = tiny
% three buses, one tapped branch
mpc.baseMVA = 100;
mpc.bus = [
  1 3 0 0 0 0 1 1 0 138 1 1.06 0.94;
  2 1 0 0 0 0 1 1 0 138 1 1.06 0.94;
  3 1 0 0 0 0 1 1 0 69  1 1.06 0.94;
];
mpc.branch = [
  1 2 0.01 0.1 0 0 0 0 0     0 1 -360 360;
  2 3 0.01 0.1 0 0 0 0 0.978 0 1 -360 360;
  1 3 0.01 0.1 0 0 0 0 0     0 0 -360 360;
];
)";

std::string replace(std::string s, const std::string& from, const std::string& to) {
  s.replace(s.find(from), from.size(), to);
  return s;
}

}  // namespace

TEST_SUITE("ingest") {

TEST_CASE("parse a small case") {
  const CaseFile c = parse_case(kTiny);
  CHECK(c.name == "tiny");
  REQUIRE(c.buses.size() == 3);
  REQUIRE(c.branches.size() == 3);
  CHECK(c.buses[2].base_kv == 69.0);
  CHECK(c.branches[1].tap == doctest::Approx(0.978));
  CHECK_FALSE(c.branches[2].in_service);
}

TEST_CASE("tap-ratio, voltage-mismatch and explicit-list rules") {
  const CaseFile c = parse_case(kTiny);
  const GridGraph tap = build_grid(c, TransformerRule::tap_ratio());
  CHECK(tap.transformers().size() == 1);
  CHECK(tap.lines().size() == 1);
  CHECK(tap.transformers()[0].id == 4);
  CHECK(tap.topology().node_count() == 4);

  const GridGraph kv = build_grid(c, TransformerRule::voltage_mismatch());
  CHECK(kv.transformers().size() == 1);

  const GridGraph listed = build_grid(c, TransformerRule::explicit_list({1, 2}));
  CHECK(listed.transformers().size() == 2);
  CHECK(listed.lines().empty());
  // Lines plus transformers equals the in-service branch count.
  CHECK(listed.branch_count() == 2);
}

TEST_CASE("no tapped branches means no transformers") {
  const CaseFile c = parse_case(replace(kTiny, "0.978", "0"));
  CHECK(build_grid(c, TransformerRule::tap_ratio()).transformers().empty());
}

TEST_CASE("explicit-list errors") {
  const CaseFile c = parse_case(kTiny);
  CHECK_THROWS_AS(build_grid(c, TransformerRule::explicit_list({})), SchemaError);
  CHECK_THROWS_AS(build_grid(c, TransformerRule::explicit_list({4})), SchemaError);
}

TEST_CASE("syntax errors carry line and column") {
  try {
    parse_case(replace(kTiny, "  2 1 0 0", "  2 x 0 0"));
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 6);
    CHECK(e.column() > 0);
  }
  CHECK_THROWS_AS(parse_case("mpc.bus = [ 1 2 3 ;"), ParseError);
  CHECK_THROWS_AS(parse_case("% nothing here\n"), ParseError);
}

TEST_CASE("schema errors") {
  CHECK_THROWS_AS(parse_case(replace(kTiny, "  2 1 0 0", "  1 1 0 0")), SchemaError);
  CHECK_THROWS_AS(parse_case(replace(kTiny, "  2 3 0.01", "  2 99 0.01")), SchemaError);
  const std::string empty = "mpc.bus = [\n];\nmpc.branch = [\n];\n";
  CHECK_THROWS_AS(parse_case(empty), SchemaError);
}

TEST_CASE("build_grid is independent of branch row order") {
  const CaseFile c = parse_case(kTiny);
  CaseFile shuffled = c;
  std::reverse(shuffled.branches.begin(), shuffled.branches.end());
  const GridGraph a = build_grid(c, TransformerRule::tap_ratio());
  const GridGraph b = build_grid(shuffled, TransformerRule::tap_ratio());
  CHECK(a.topology().edges() == b.topology().edges());
  CHECK(a.buses() == b.buses());
}

TEST_CASE("parallel branches merge by default") {
  std::string text = replace(kTiny, "  1 3 0.01 0.1 0 0 0 0 0     0 0",
                             "  2 1 0.01 0.1 0 0 0 0 0     0 1");
  const CaseFile c = parse_case(text);
  CHECK(build_grid(c, TransformerRule::tap_ratio()).lines().size() == 1);
  BuildOptions keep;
  keep.merge_parallel = false;
  CHECK(build_grid(c, TransformerRule::tap_ratio(), keep).lines().size() == 2);
}

TEST_CASE("grid document round trip") {
  const GridGraph g = find_fixture("ieee57").grid();
  const std::string text = write_grid(g);
  const GridGraph back = read_grid(text);
  CHECK(back == g);
  CHECK(write_grid(back) == text);
}

TEST_CASE("hand-written grid document") {
  const char* doc = R"({
    "schema_version": 1,
    "meta": {"name": "hand"},
    "buses": [{"id": 1, "name": "a"}, {"id": 2, "name": "b"}, {"id": 3, "name": "c"}],
    "lines": [{"branch": 1, "from": 1, "to": 2}],
    "transformers": [{"id": 4, "name": "T1", "branch": 2, "from": 2, "to": 3}]
  })";
  const GridGraph g = read_grid(doc);
  CHECK(g.topology().node_count() == 4);
  CHECK(g.transformers().size() == 1);
}

TEST_CASE("malformed grid documents") {
  CHECK_THROWS_AS(read_grid("{"), ParseError);
  CHECK_THROWS_AS(read_grid(R"({"schema_version": 1, "meta": {}, "buses": [], "lines": []})"),
                  ParseError);
  CHECK_THROWS_AS(
      read_grid(R"({"schema_version": 2, "meta": {}, "buses": [], "lines": [], "transformers": []})"),
      ParseError);
  CHECK_THROWS_AS(
      read_grid(
          R"({"schema_version": 1, "meta": {}, "buses": [], "lines": [], "transformers": [], "x": 1})"),
      ParseError);
}

TEST_CASE("bundled fixtures") {
  const auto fixtures = load_fixtures();
  REQUIRE(fixtures.size() == 6);
  const GridGraph g14 = find_fixture("ieee14").grid();
  CHECK(g14.buses().size() == 14);
  CHECK(g14.branch_count() == 20);
  CHECK(g14.transformers().size() == 5);
  CHECK(find_fixture("ieee30").grid().transformers().size() == 7);
  const CaseFile c14 = load_case(find_fixture("ieee14").case_path);
  CHECK(c14.branches.size() == 20);
  CHECK_THROWS_AS(find_fixture("nope"), NotFound);
  CHECK_THROWS_AS(load_fixtures("/nonexistent"), ConfigError);
}

TEST_CASE("transformer rule names") {
  CHECK(parse_transformer_mode("tap-ratio") == TransformerMode::TapRatio);
  CHECK(to_string(TransformerMode::ExplicitList) == "explicit-list");
  CHECK_THROWS_AS(parse_transformer_mode("magic"), ConfigError);
}

}  // TEST_SUITE

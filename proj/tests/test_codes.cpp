#include <doctest.h>

#include <map>
#include <sstream>

#include "gridcode/codes.hpp"
#include "gridcode/construct.hpp"
#include "gridcode/errors.hpp"
#include "gridcode/fixtures.hpp"
#include "support.hpp"

using namespace gridcode;

namespace {

std::vector<std::string> rendered(const Placement& p) {
  std::vector<std::string> out;
  for (const auto& s : p.signatures()) out.push_back(format_signature(s));
  return out;
}

}  // namespace

TEST_SUITE("codes") {

TEST_CASE("labels continue past Z") {
  CHECK(label_for(0) == "A");
  CHECK(label_for(25) == "Z");
  CHECK(label_for(26) == "AA");
  CHECK(label_for(27) == "AB");
  CHECK(label_for(51) == "AZ");
  CHECK(label_for(52) == "BA");
  CHECK(label_for(701) == "ZZ");
  CHECK(label_for(702) == "AAA");
}

TEST_CASE("signature text") {
  CHECK(parse_signature("AC") == Signature{"A", "C"});
  CHECK(parse_signature("A,BC") == Signature{"A", "BC"});
  CHECK(parse_signature("").empty());
  CHECK(format_signature({"A", "C"}) == "AC");
  CHECK(format_signature({"A", "AA"}) == "A,AA");
  CHECK(parse_signature(format_signature({"B", "AB"})) == Signature{"B", "AB"});
}

TEST_CASE("IEEE 14 k=2 reference placement") {
  const auto m = find_fixture("ieee14").instance(2);
  const Placement p = assign_codes(m, {8, 27, 35});
  CHECK(rendered(p) == std::vector<std::string>{"AB", "ABC", "A", "B", "BC"});
  CHECK(decode(p, {"A", "B"}).target == 0u);
  CHECK(decode(p, {"A", "B", "C"}).target == 1u);
  CHECK(describe(p, decode(p, {"A"})) == "Identified(T3)");
  const auto healthy = decode(p, {});
  CHECK_FALSE(healthy.identified());
  CHECK(describe(p, healthy).rfind("NoMatch", 0) == 0);
  CHECK_THROWS_AS(decode(p, {"D"}), NotFound);
}

TEST_CASE("IEEE 14 k=1 reference placement") {
  const auto m = find_fixture("ieee14").instance(1);
  const Placement p = assign_codes(m, {14, 19, 27, 30});
  const auto sigs = rendered(p);
  CHECK(sigs[0] == "AC");
  CHECK(sigs[1] == "A");
  CHECK(sigs[2] == "B");
  CHECK(sigs[3] == "CD");
  // Site 27 sits on a terminal bus of T5, so T5 reads C rather than D.
  CHECK(sigs[4] == "C");
}

TEST_CASE("not a code") {
  const auto m = find_fixture("ieee14").instance(2);
  try {
    assign_codes(m, {8});
    FAIL("expected NotACode");
  } catch (const NotACode& e) {
    CHECK_FALSE(e.report().passed());
  }
}

TEST_CASE("single target") {
  const MonitorInstance m({{1, "T1"}}, {{10, 0, 10}}, {{10}}, 1);
  const Placement p = assign_codes(m, {10});
  CHECK(p.signature(0) == Signature{"A"});
}

TEST_CASE("decode round trip and nearest signatures on random codes") {
  for (std::uint64_t seed = 1; seed <= 80; ++seed) {
    const auto m = testing::oracle_instance(seed);
    const auto sc = reduce(m);
    if (!check_feasible(sc).feasible()) continue;
    const auto s = solve_exact(sc);
    const Placement p = assign_codes(m, s.selected);
    const auto v = verify(m, s.selected);
    for (std::size_t t = 0; t < m.targets().size(); ++t) {
      CHECK(decode(p, p.signature(t)).target == t);
      Signature from_trace;
      for (NodeId site : v.traces[t]) from_trace.insert(p.label_of(site));
      CHECK(from_trace == p.signature(t));
    }
    // Relabel in reverse: decode outcomes follow the relabeling.
    std::vector<Label> reversed(p.labels().rbegin(), p.labels().rend());
    const Placement q = assign_codes(m, s.selected, reversed);
    std::map<Label, Label> to_q;
    for (std::size_t i = 0; i < p.labels().size(); ++i) to_q[p.labels()[i]] = q.labels()[i];
    for (std::size_t t = 0; t < m.targets().size(); ++t) {
      Signature mapped;
      for (const auto& l : p.signature(t)) mapped.insert(to_q[l]);
      CHECK(mapped == q.signature(t));
      CHECK(decode(q, mapped).target == t);
    }
  }
}

TEST_CASE("nearest signatures for an unmatched pattern") {
  const auto m = find_fixture("ieee14").instance(2);
  const Placement p = assign_codes(m, {8, 27, 35});
  const auto r = decode(p, {"A", "C"});
  CHECK_FALSE(r.identified());
  REQUIRE_FALSE(r.nearest.empty());
  for (const auto& n : r.nearest) CHECK(n.distance == 1);
}

TEST_CASE("tables") {
  const auto m = find_fixture("ieee14").instance(2);
  const Placement p = assign_codes(m, {8, 27, 35});
  const std::string csv = signature_csv(p);
  std::istringstream in(csv);
  std::string line;
  std::size_t rows = 0;
  std::getline(in, line);
  CHECK(line == "target,name,signature,sites");
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 5);
  CHECK(signature_table(p).find("T2      ABC") != std::string::npos);

  const MonitorInstance empty({}, {}, {}, 1);
  CHECK(signature_table(assign_codes(empty, {})).empty());
}

TEST_CASE("identifying-code example reproduces its trace table") {
  const MonitorInstance m = build_ics_instance(ics_example_graph());
  const Placement p = assign_codes(m, {1, 2, 3, 4});
  CHECK(rendered(p) ==
        std::vector<std::string>{"A", "B", "C", "D", "AB", "AC", "AD", "BC", "BD", "CD"});
}

TEST_CASE("placement document round trip") {
  const auto m = find_fixture("ieee14").instance(2);
  const Placement p = assign_codes(m, {8, 27, 35});
  const std::string text = write_placement(p);
  const Placement back = read_placement(text);
  CHECK(back.sites() == p.sites());
  CHECK(back.labels() == p.labels());
  CHECK(write_placement(back) == text);
  CHECK_THROWS_AS(read_placement("[]"), ParseError);
}

}  // TEST_SUITE

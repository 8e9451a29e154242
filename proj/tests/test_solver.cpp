#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "gridcode/construct.hpp"
#include "gridcode/errors.hpp"
#include "gridcode/fixtures.hpp"
#include "gridcode/solver.hpp"
#include "support.hpp"

using namespace gridcode;

namespace {

std::vector<NodeId> subset_of(const MonitorInstance& m, std::uint32_t mask) {
  std::vector<NodeId> out;
  for (std::size_t i = 0; i < m.candidates().size(); ++i) {
    if (mask >> i & 1) out.push_back(m.candidates()[i].id);
  }
  return out;
}

// Every optimum in lexicographic order, by exhaustive enumeration.
std::vector<std::vector<NodeId>> oracle_optima(const MonitorInstance& m, int size) {
  std::vector<std::vector<NodeId>> out;
  const std::size_t n = m.candidates().size();
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (std::popcount(mask) != size) continue;
    auto s = subset_of(m, mask);
    if (testing::is_code(m, s)) out.push_back(std::move(s));
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_SUITE("solver") {

TEST_CASE("universe layout") {
  const auto m = find_fixture("ieee14").instance(1);
  const SetCoverInstance sc = reduce(m);
  std::size_t cover = 0, disc = 0;
  for (const auto& e : sc.universe) {
    if (e.kind == ElementKind::Cover) ++cover;
    else ++disc;
  }
  CHECK(cover == 5);
  CHECK(disc == 10);
  CHECK(sc.universe[5] == Element{ElementKind::Discriminate, 0, 1});
  CHECK(sc.columns.size() == 40);

  const MonitorInstance one({{1, "T1"}}, {{10, 0, 10}}, {{10}}, 1);
  CHECK(reduce(one).universe.size() == 1);
}

TEST_CASE("columns follow from the adjacency") {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const auto m = testing::oracle_instance(seed);
    const auto sc = reduce(m);
    for (std::size_t c = 0; c < sc.columns.size(); ++c) {
      const NodeId id = sc.candidate_ids[c];
      auto sees = [&](std::size_t t) {
        const auto& o = m.observers_of(t);
        return std::binary_search(o.begin(), o.end(), id);
      };
      std::set<std::size_t> expect;
      for (std::size_t e = 0; e < sc.universe.size(); ++e) {
        const auto& el = sc.universe[e];
        const bool in = el.kind == ElementKind::Cover ? sees(el.first)
                                                      : sees(el.first) != sees(el.second);
        if (in) expect.insert(e);
      }
      CHECK(std::set<std::size_t>(sc.columns[c].begin(), sc.columns[c].end()) == expect);
    }
  }
}

TEST_CASE("feasibility report names twins and unobservable targets") {
  const MonitorInstance m({{1, "a"}, {2, "b"}, {3, "c"}, {4, "d"}},
                          {{10, 0, 10}, {11, 0, 11}}, {{10}, {10}, {}, {11}}, 1);
  const auto r = check_feasible(reduce(m));
  CHECK_FALSE(r.feasible());
  CHECK(r.unobservable == std::vector<std::size_t>{2});
  REQUIRE(r.twins.size() == 1);
  CHECK(r.twins[0] == std::pair<std::size_t, std::size_t>{0, 1});
  CHECK(r.describe().find("a") != std::string::npos);
  CHECK_THROWS_AS(solve_exact(reduce(m)), Infeasible);
  CHECK_THROWS_AS(solve_greedy(reduce(m)), Infeasible);
  CHECK_THROWS_AS(solve_bruteforce(reduce(m)), Infeasible);
  CHECK(check_feasible(reduce(find_fixture("ieee14").instance(2))).feasible());
}

TEST_CASE("IEEE 14 optima") {
  const Fixture f = find_fixture("ieee14");
  const auto s1 = solve_exact(reduce(f.instance(1)));
  CHECK(s1.size() == 4);
  CHECK(s1.optimal);
  CHECK(s1.selected == std::vector<NodeId>{14, 19, 27, 30});
  const auto s2 = solve_exact(reduce(f.instance(2)));
  CHECK(s2.size() == 3);
  CHECK(s2.selected == std::vector<NodeId>{8, 27, 35});
}

TEST_CASE("exact equals the subset oracle and brute force on random instances") {
  for (std::uint64_t seed = 1; seed <= 150; ++seed) {
    const auto m = testing::oracle_instance(seed);
    const auto sc = reduce(m);
    const int oracle = testing::oracle_minimum(m);
    if (oracle < 0) {
      CHECK_FALSE(check_feasible(sc).feasible());
      CHECK_THROWS_AS(solve_exact(sc), Infeasible);
      CHECK_THROWS_AS(solve_bruteforce(sc), Infeasible);
      continue;
    }
    const auto exact = solve_exact(sc);
    const auto brute = solve_bruteforce(sc);
    CHECK(static_cast<int>(exact.size()) == oracle);
    CHECK(exact.selected == brute.selected);
    CHECK(exact.selected == oracle_optima(m, oracle).front());
    CHECK(verify(m, exact.selected).passed());
    CHECK(covers(sc, exact.selected));
  }
}

TEST_CASE("any-optimum tie break keeps the size") {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    const auto m = testing::oracle_instance(seed);
    const auto sc = reduce(m);
    if (!check_feasible(sc).feasible()) continue;
    ExactOptions any;
    any.tie_break = TieBreak::Any;
    const auto a = solve_exact(sc, any);
    CHECK(a.size() == solve_exact(sc).size());
    CHECK(verify(m, a.selected).passed());
  }
}

TEST_CASE("exact solutions are irredundant and deterministic") {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    const auto m = testing::oracle_instance(seed);
    const auto sc = reduce(m);
    if (!check_feasible(sc).feasible()) continue;
    const auto s = solve_exact(sc);
    CHECK(solve_exact(sc).selected == s.selected);
    for (std::size_t i = 0; i < s.selected.size(); ++i) {
      auto fewer = s.selected;
      fewer.erase(fewer.begin() + static_cast<std::ptrdiff_t>(i));
      CHECK_FALSE(verify(m, fewer).passed());
    }
  }
}

TEST_CASE("greedy is feasible and within the logarithmic bound") {
  for (std::uint64_t seed = 1; seed <= 150; ++seed) {
    const auto m = testing::oracle_instance(seed);
    const auto sc = reduce(m);
    if (!check_feasible(sc).feasible()) continue;
    const auto g = solve_greedy(sc);
    const auto e = solve_exact(sc);
    CHECK_FALSE(g.optimal);
    CHECK(verify(m, g.selected).passed());
    CHECK(g.size() >= e.size());
    const double bound =
        static_cast<double>(e.size()) * (std::log(static_cast<double>(sc.universe.size())) + 1);
    CHECK(static_cast<double>(g.size()) <= bound + 1e-9);
  }
  const MonitorInstance all({{1, "a"}}, {{10, 0, 10}, {11, 0, 11}}, {{10, 11}}, 1);
  CHECK(solve_greedy(reduce(all)).size() == 1);
  CHECK(solve_greedy(reduce(all)).selected == std::vector<NodeId>{10});
}

TEST_CASE("brute force edge cases") {
  const MonitorInstance none({}, {{10, 0, 10}}, {}, 1);
  const auto s = solve_bruteforce(reduce(none));
  CHECK(s.size() == 0);
  CHECK(s.optimal);
  CHECK(solve_exact(reduce(none)).size() == 0);

  // 21 viable candidates exceed the default cap.
  std::vector<std::vector<NodeId>> obs(6);
  std::vector<Candidate> cands;
  for (int c = 0; c < 21; ++c) {
    cands.push_back({100 + c, 0, 100 + c});
    for (int t = 0; t < 6; ++t) {
      if (t == 5 || ((c + 1) >> t & 1)) obs[t].push_back(100 + c);
    }
  }
  std::vector<Target> ts;
  for (int t = 0; t < 6; ++t) ts.push_back({t + 1, "T" + std::to_string(t + 1)});
  const auto sc = reduce(MonitorInstance(ts, cands, obs, 1));
  CHECK(check_feasible(sc).feasible());
  CHECK_THROWS_AS(solve_bruteforce(sc), TooLarge);
  CHECK(solve_bruteforce(sc, 21).size() == solve_exact(sc).size());
}

TEST_CASE("enumerate_optima lists every optimum in order") {
  for (std::uint64_t seed = 1; seed <= 80; ++seed) {
    const auto m = testing::oracle_instance(seed);
    const auto sc = reduce(m);
    const int size = testing::oracle_minimum(m);
    if (size < 0) continue;
    const auto expect = oracle_optima(m, size);
    CHECK(enumerate_optima(sc, 1000) == expect);
    const auto two = enumerate_optima(sc, 2);
    CHECK(two.size() == std::min<std::size_t>(2, expect.size()));
    CHECK(enumerate_optima(sc, 0).empty());
  }
}

TEST_CASE("reduction soundness by exhaustive subsets") {
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const auto m = testing::oracle_instance(seed + 1000);
    const auto sc = reduce(m);
    const std::size_t n = m.candidates().size();
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
      const auto s = subset_of(m, mask);
      const bool pass = verify(m, s).passed();
      CHECK(covers(sc, s) == pass);
      CHECK(pass == testing::is_code(m, s));
    }
  }
}

TEST_CASE("verify reports empty traces and collisions") {
  const auto m = find_fixture("ieee14").instance(1);
  const auto reference = verify(m, {14, 19, 27, 30});
  CHECK(reference.passed());
  const auto nothing = verify(m, {});
  CHECK_FALSE(nothing.passed());
  CHECK(nothing.empty.size() == 5);
  const auto one = verify(m, {14});
  CHECK_FALSE(one.collisions.empty());
  CHECK_THROWS_AS(verify(m, {999}), NotFound);

  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const auto r = testing::oracle_instance(seed);
    std::vector<NodeId> all;
    for (const auto& c : r.candidates()) all.push_back(c.id);
    CHECK(verify(r, all).passed() == check_feasible(reduce(r)).feasible());
  }
}

TEST_CASE("optimum at k=2 never exceeds k=1 on small fixtures") {
  for (const char* name : {"ieee14", "ieee30", "ieee57", "ieee118", "pegase89"}) {
    const Fixture f = find_fixture(name);
    CHECK(solve_exact(reduce(f.instance(2))).size() <=
          solve_exact(reduce(f.instance(1))).size());
  }
}

TEST_CASE("LP export") {
  const auto sc = reduce(find_fixture("ieee14").instance(2));
  const std::string lp = export_lp(sc);
  CHECK(lp == export_lp(sc));
  std::istringstream in(lp);
  std::string line;
  std::size_t color = 0, unique = 0, binaries = 0;
  bool in_binary = false;
  while (std::getline(in, line)) {
    if (line.rfind(" color_", 0) == 0) ++color;
    if (line.rfind(" unique_", 0) == 0) ++unique;
    if (line == "Binaries") {
      in_binary = true;
      continue;
    }
    if (line == "End") in_binary = false;
    if (in_binary) {
      std::istringstream words(line);
      std::string w;
      while (words >> w) ++binaries;
    }
  }
  CHECK(color == 5);
  CHECK(unique == 10);
  CHECK(binaries == 40);
  CHECK(lp.find("Minimize") != std::string::npos);
}

}  // TEST_SUITE

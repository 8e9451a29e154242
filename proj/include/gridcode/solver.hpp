#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "gridcode/errors.hpp"
#include "gridcode/graph.hpp"

namespace gridcode {

enum class ElementKind { Cover, Discriminate };

// Cover(first): some selected site observes target `first`.
// Discriminate(first, second), first < second: some selected site observes
// exactly one of the two targets.
struct Element {
  ElementKind kind = ElementKind::Cover;
  std::size_t first = 0;
  std::size_t second = 0;

  friend bool operator==(const Element&, const Element&) = default;
};

// Set-cover form of a discriminating-code instance. Columns follow the
// candidate order of the source MonitorInstance; columns[i] holds the
// sorted universe indices covered by candidate_ids[i].
struct SetCoverInstance {
  std::vector<NodeId> candidate_ids;
  std::vector<std::string> target_names;
  std::vector<Element> universe;
  std::vector<std::vector<std::size_t>> columns;

  std::size_t target_count() const { return target_names.size(); }
};

// Universe = |V1| Cover elements (target order) followed by the
// |V1|(|V1|-1)/2 Discriminate elements in (j, k) lexicographic order.
SetCoverInstance reduce(const MonitorInstance& m);

struct FeasibilityReport {
  std::vector<std::size_t> unobservable;                   // target indices
  std::vector<std::pair<std::size_t, std::size_t>> twins;  // target index pairs
  std::vector<std::string> target_names;

  bool feasible() const { return unobservable.empty() && twins.empty(); }
  std::string describe() const;
};

FeasibilityReport check_feasible(const SetCoverInstance& sc);

class Infeasible : public Error {
 public:
  explicit Infeasible(FeasibilityReport report)
      : Error("instance is infeasible: " + report.describe()),
        report_(std::move(report)) {}
  const FeasibilityReport& report() const { return report_; }

 private:
  FeasibilityReport report_;
};

struct SolveStats {
  std::uint64_t nodes = 0;
  double seconds = 0.0;
};

struct Solution {
  std::vector<NodeId> selected;  // ascending ids
  bool optimal = false;
  SolveStats stats;

  std::size_t size() const { return selected.size(); }
};

// Which optimum solve_exact returns. Any skips the lexicographic pass on
// large components, which can cost far more than the minimum itself.
enum class TieBreak { Lexicographic, Any };

struct ExactOptions {
  TieBreak tie_break = TieBreak::Lexicographic;
};

// Minimum-cardinality cover by branch and bound. Among all optima the
// lexicographically smallest id set is returned unless `options` says
// otherwise. Throws Infeasible.
Solution solve_exact(const SetCoverInstance& sc, const ExactOptions& options = {});

// Largest-uncovered-count greedy, ties to the smaller id. Throws Infeasible.
Solution solve_greedy(const SetCoverInstance& sc);

inline constexpr std::size_t kBruteForceCap = 20;

// Exhaustive search over subsets of the non-empty columns in increasing
// size, lexicographic within a size. Throws TooLarge when more than `cap`
// columns are non-empty, Infeasible when no subset covers the universe.
Solution solve_bruteforce(const SetCoverInstance& sc,
                          std::size_t cap = kBruteForceCap);

// Every optimum, in lexicographic order, up to `limit` of them.
std::vector<std::vector<NodeId>> enumerate_optima(const SetCoverInstance& sc,
                                                  std::size_t limit);

// True when `selected` covers every universe element.
bool covers(const SetCoverInstance& sc, const std::vector<NodeId>& selected);

struct VerificationReport {
  // traces[i] = sorted selected sites observing target i.
  std::vector<std::vector<NodeId>> traces;
  std::vector<std::size_t> empty;                               // target indices
  std::vector<std::pair<std::size_t, std::size_t>> collisions;  // equal traces

  bool passed() const { return empty.empty() && collisions.empty(); }
};

// Checks the discriminating-code property directly on the bipartite graph.
// Throws NotFound for ids that are not candidates of m.
VerificationReport verify(const MonitorInstance& m,
                          const std::vector<NodeId>& selected);

// CPLEX LP text of the covering ILP: one binary per candidate, objective
// sum of all binaries, one `>= 1` row per universe element.
std::string export_lp(const SetCoverInstance& sc);

}  // namespace gridcode

#pragma once

// LP-based branch and cut for unit-cost set cover, used for components too
// large for the combinatorial search. Columns are indexed 0..n-1 and index
// order is the lexicographic order of the caller.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

namespace gridcode::detail {

class CoverBranchAndCut {
 public:
  // elem_cols[e] lists the columns covering element e.
  CoverBranchAndCut(std::size_t columns, std::vector<std::vector<std::size_t>> elem_cols);
  ~CoverBranchAndCut();
  CoverBranchAndCut(const CoverBranchAndCut&) = delete;
  CoverBranchAndCut& operator=(const CoverBranchAndCut&) = delete;

  // Minimum cover size; `incumbent` is any cover.
  std::size_t minimum(std::vector<std::size_t> incumbent);
  // Best cover found so far, ascending.
  const std::vector<std::size_t>& incumbent() const;

  // Covers of exactly `size` columns in lexicographic order. `visit`
  // returns true to stop. `size` must be the optimum.
  void enumerate(std::size_t size,
                 const std::function<bool(const std::vector<std::size_t>&)>& visit);

  std::uint64_t nodes() const;
  double root_bound() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace gridcode::detail

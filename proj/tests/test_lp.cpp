#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "cover_bc.hpp"
#include "covering_lp.hpp"
#include "gridcode/solver.hpp"

using gridcode::detail::CoverBranchAndCut;
using gridcode::detail::CoverLp;
using gridcode::detail::SparseRow;

namespace {

struct Dense {
  std::size_t n = 0;
  std::vector<std::vector<double>> rows;  // a.x >= b, last entry b
  std::vector<double> lo, hi;
};

// Solves a square system in place by Gaussian elimination.
bool solve_square(std::vector<std::vector<double>> a, std::vector<double> b,
                  std::vector<double>& x) {
  const std::size_t n = b.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    for (std::size_t r = c + 1; r < n; ++r) {
      if (std::abs(a[r][c]) > std::abs(a[p][c])) p = r;
    }
    if (std::abs(a[p][c]) < 1e-9) return false;
    std::swap(a[p], a[c]);
    std::swap(b[p], b[c]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c) continue;
      const double f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  x.resize(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = b[i] / a[i][i];
  return true;
}

// Minimum of sum(x) over all vertices of the polytope, or +inf when empty.
double vertex_oracle(const Dense& d) {
  std::vector<std::vector<double>> a;
  std::vector<double> b;
  for (const auto& r : d.rows) {
    a.emplace_back(r.begin(), r.end() - 1);
    b.push_back(r.back());
  }
  for (std::size_t j = 0; j < d.n; ++j) {
    std::vector<double> e(d.n, 0.0);
    e[j] = 1.0;
    a.push_back(e);
    b.push_back(d.lo[j]);
    a.push_back(e);
    b.push_back(d.hi[j]);
  }
  const std::size_t m = a.size();
  double best = INFINITY;
  std::vector<std::size_t> pick(d.n);
  std::vector<char> mask(m, 0);
  std::fill(mask.begin(), mask.begin() + static_cast<std::ptrdiff_t>(d.n), 1);
  std::sort(mask.begin(), mask.end());
  do {
    std::vector<std::vector<double>> sa;
    std::vector<double> sb;
    for (std::size_t i = 0; i < m; ++i) {
      if (mask[i]) {
        sa.push_back(a[i]);
        sb.push_back(b[i]);
      }
    }
    std::vector<double> x;
    if (!solve_square(sa, sb, x)) continue;
    bool ok = true;
    for (std::size_t j = 0; j < d.n && ok; ++j) {
      ok = x[j] >= d.lo[j] - 1e-9 && x[j] <= d.hi[j] + 1e-9;
    }
    for (const auto& r : d.rows) {
      if (!ok) break;
      double s = 0.0;
      for (std::size_t j = 0; j < d.n; ++j) s += r[j] * x[j];
      ok = s >= r.back() - 1e-9;
    }
    if (!ok) continue;
    double obj = 0.0;
    for (double v : x) obj += v;
    best = std::min(best, obj);
  } while (std::next_permutation(mask.begin(), mask.end()));
  return best;
}

SparseRow sparse(const std::vector<double>& dense_row) {
  SparseRow r;
  for (std::size_t j = 0; j + 1 < dense_row.size(); ++j) {
    if (dense_row[j] != 0.0) {
      r.index.push_back(j);
      r.value.push_back(dense_row[j]);
    }
  }
  r.rhs = dense_row.back();
  return r;
}

// Random set cover: every element gets at least one column.
std::vector<std::vector<std::size_t>> random_cover(std::mt19937_64& rng, std::size_t elems,
                                                   std::size_t cols, double p) {
  std::bernoulli_distribution in(p);
  std::uniform_int_distribution<std::size_t> any(0, cols - 1);
  std::vector<std::vector<std::size_t>> ec(elems);
  for (std::size_t e = 0; e < elems; ++e) {
    for (std::size_t c = 0; c < cols; ++c) {
      if (in(rng)) ec[e].push_back(c);
    }
    if (ec[e].empty()) ec[e].push_back(any(rng));
  }
  return ec;
}

gridcode::SetCoverInstance as_instance(const std::vector<std::vector<std::size_t>>& ec,
                                       std::size_t cols) {
  gridcode::SetCoverInstance sc;
  sc.columns.assign(cols, {});
  for (std::size_t c = 0; c < cols; ++c) sc.candidate_ids.push_back(static_cast<gridcode::NodeId>(c));
  sc.target_names.push_back("t");
  for (std::size_t e = 0; e < ec.size(); ++e) {
    sc.universe.push_back({gridcode::ElementKind::Cover, 0, 0});
    for (std::size_t c : ec[e]) sc.columns[c].push_back(e);
  }
  return sc;
}

std::vector<std::size_t> all_columns(std::size_t n) {
  std::vector<std::size_t> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = i;
  return v;
}

}  // namespace

TEST_SUITE("lp") {

TEST_CASE("triangle relaxation") {
  CoverLp lp({1.0, 1.0, 1.0});
  lp.add_row({{0, 1}, {1, 1}, 1});
  lp.add_row({{1, 2}, {1, 1}, 1});
  lp.add_row({{0, 2}, {1, 1}, 1});
  REQUIRE(lp.solve() == CoverLp::Status::Optimal);
  CHECK(lp.objective() == doctest::Approx(1.5));
  for (std::size_t j = 0; j < 3; ++j) CHECK(lp.x()[j] == doctest::Approx(0.5));

  lp.set_bounds(1, 0, 0);
  REQUIRE(lp.solve() == CoverLp::Status::Optimal);
  CHECK(lp.objective() == doctest::Approx(2.0));

  // x0 + x1 >= 1 with both fixed at 0 is infeasible.
  lp.set_bounds(0, 0, 0);
  CHECK(lp.solve() == CoverLp::Status::Infeasible);

  lp.set_bounds(0, 0, 1);
  lp.set_bounds(1, 0, 1);
  REQUIRE(lp.solve() == CoverLp::Status::Optimal);
  CHECK(lp.objective() == doctest::Approx(1.5));
}

TEST_CASE("random covering LPs match a vertex-enumeration oracle") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 60; ++trial) {
    Dense d;
    d.n = 2 + static_cast<std::size_t>(trial % 4);
    const std::size_t m = 2 + static_cast<std::size_t>(trial % 5);
    std::uniform_int_distribution<int> coef(0, 2);
    for (std::size_t r = 0; r < m; ++r) {
      std::vector<double> row(d.n + 1, 0.0);
      for (std::size_t j = 0; j < d.n; ++j) row[j] = coef(rng);
      row[d.n] = 1.0 + (trial % 3 == 0 ? coef(rng) : 0);
      d.rows.push_back(row);
    }
    d.lo.assign(d.n, 0.0);
    d.hi.assign(d.n, 1.0);
    if (trial % 2) {
      d.hi[0] = 0.0;
      d.lo[d.n - 1] = 1.0;
    }

    CoverLp lp(std::vector<double>(d.n, 1.0));
    for (const auto& row : d.rows) lp.add_row(sparse(row));
    for (std::size_t j = 0; j < d.n; ++j) lp.set_bounds(j, d.lo[j], d.hi[j]);
    const double expect = vertex_oracle(d);
    const auto status = lp.solve();
    if (std::isinf(expect)) {
      CHECK(status == CoverLp::Status::Infeasible);
    } else {
      REQUIRE(status == CoverLp::Status::Optimal);
      CHECK(lp.objective() == doctest::Approx(expect).epsilon(1e-7));
    }
  }
}

TEST_CASE("slack rows can be dropped without changing the optimum") {
  CoverLp lp({1.0, 1.0, 1.0, 1.0});
  lp.add_row({{0, 1}, {1, 1}, 1});
  lp.add_row({{2, 3}, {1, 1}, 1});
  lp.add_row({{0, 1, 2, 3}, {1, 1, 1, 1}, 1});  // implied, slack at the optimum
  REQUIRE(lp.solve() == CoverLp::Status::Optimal);
  const double before = lp.objective();
  const auto dropped = lp.drop_slack_rows(0.5, 2);
  CHECK(dropped.size() == 3);
  CHECK(dropped[2] == 1);
  CHECK(lp.rows() == 2);
  REQUIRE(lp.solve() == CoverLp::Status::Optimal);
  CHECK(lp.objective() == doctest::Approx(before));
}

TEST_CASE("branch and cut agrees with the combinatorial search") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 25; ++trial) {
    const std::size_t cols = 20 + static_cast<std::size_t>(trial) * 3;
    const std::size_t elems = 30 + static_cast<std::size_t>(trial) * 2;
    const auto ec = random_cover(rng, elems, cols, 0.08);
    const auto sc = as_instance(ec, cols);
    const auto expect = gridcode::solve_exact(sc);

    CoverBranchAndCut bc(cols, ec);
    const std::size_t size = bc.minimum(all_columns(cols));
    CHECK(size == expect.size());
    CHECK(bc.root_bound() <= static_cast<double>(size) + 1e-6);

    std::vector<std::size_t> first;
    bc.enumerate(size, [&](const std::vector<std::size_t>& c) {
      first = c;
      return true;
    });
    std::vector<gridcode::NodeId> ids(first.begin(), first.end());
    CHECK(ids == expect.selected);
  }
}

TEST_CASE("branch and cut enumerates every optimum in order") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 15; ++trial) {
    const std::size_t cols = 10 + static_cast<std::size_t>(trial);
    const auto ec = random_cover(rng, 14, cols, 0.2);
    const auto sc = as_instance(ec, cols);
    const auto expect = gridcode::enumerate_optima(sc, 100000);

    CoverBranchAndCut bc(cols, ec);
    const std::size_t size = bc.minimum(all_columns(cols));
    std::vector<std::vector<gridcode::NodeId>> got;
    bc.enumerate(size, [&](const std::vector<std::size_t>& c) {
      got.emplace_back(c.begin(), c.end());
      return false;
    });
    CHECK(got == expect);
  }
}

TEST_CASE("components above the column threshold use the LP engine") {
  std::mt19937_64 rng(11);
  const std::size_t cols = 160;
  const auto ec = random_cover(rng, 180, cols, 0.04);
  const auto sc = as_instance(ec, cols);
  const auto lex = gridcode::solve_exact(sc);
  gridcode::ExactOptions any;
  any.tie_break = gridcode::TieBreak::Any;
  const auto quick = gridcode::solve_exact(sc, any);
  CHECK(lex.size() == quick.size());
  CHECK(gridcode::covers(sc, lex.selected));
  CHECK(gridcode::covers(sc, quick.selected));
  CHECK(lex.selected <= quick.selected);
  CHECK(gridcode::solve_greedy(sc).size() >= lex.size());
}

}  // TEST_SUITE

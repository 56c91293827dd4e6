#include "cubenorm/matching.hpp"

#include "oracles.hpp"

#include <doctest.h>

using namespace cubenorm;

namespace {

Rational total_of(const WeightMatrix& w, const Matching& m) {
  Rational t = 0;
  for (auto [a, b] : m.pairs) t += w.at(a, b);
  return t;
}

void check_perfect(const Matching& m, std::size_t n) {
  std::vector<int> seen(n, 0);
  for (auto [a, b] : m.pairs) {
    CHECK(a < b);
    ++seen[a];
    ++seen[b];
  }
  for (auto s : seen) CHECK(s == 1);
  CHECK(m.pairs.size() == n / 2);
}

}  // namespace

TEST_CASE("tiny instances") {
  WeightMatrix w2(2);
  w2.set(0, 1, Rational(7, 3));
  for (auto* solve : {&min_weight_perfect_matching, &blossom_perfect_matching,
                      &brute_force_matching, &subset_dp_perfect_matching}) {
    const auto m = (*solve)(w2);
    CHECK(m.pairs == std::vector<std::pair<std::size_t, std::size_t>>{{0, 1}});
    CHECK(m.total == Rational(7, 3));
  }

  WeightMatrix eq(4);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = i + 1; j < 4; ++j) eq.set(i, j, 5);
  CHECK(min_weight_perfect_matching(eq).total == 10);
  CHECK(blossom_perfect_matching(eq).total == 10);

  WeightMatrix w4(4);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = i + 1; j < 4; ++j) w4.set(i, j, 10);
  w4.set(0, 1, 1);
  w4.set(2, 3, 1);
  const auto bf = brute_force_matching(w4);
  CHECK(bf.pairs == std::vector<std::pair<std::size_t, std::size_t>>{{0, 1}, {2, 3}});
  CHECK(bf.total == 2);
  CHECK(blossom_perfect_matching(w4).total == 2);

  WeightMatrix empty(0);
  CHECK(min_weight_perfect_matching(empty).pairs.empty());
}

TEST_CASE("input validation") {
  CHECK_THROWS_AS(min_weight_perfect_matching(WeightMatrix(3)), CubeError);
  CHECK_THROWS_AS(blossom_perfect_matching(WeightMatrix(5)), CubeError);
  CHECK_THROWS_AS(brute_force_matching(WeightMatrix(14)), CubeError);
  WeightMatrix w(2);
  CHECK_THROWS_AS(w.set(0, 1, -1), CubeError);
  CHECK_THROWS_AS(w.set(0, 0, 1), CubeError);
}

TEST_CASE("all solvers agree with the recursive oracle") {
  oracle::Gen gen(41);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 2 * gen.between(1, 5);
    // Mix of heavy-tie integer instances and fractional ones.
    const auto w = trial % 2 ? gen.weights(n, 4, 1) : gen.weights(n, 40, 6);
    const Rational best = oracle::matching_min(w);
    for (auto* solve : {&min_weight_perfect_matching, &blossom_perfect_matching,
                        &brute_force_matching, &subset_dp_perfect_matching}) {
      const auto m = (*solve)(w);
      check_perfect(m, n);
      CHECK(m.total == best);
      CHECK(total_of(w, m) == m.total);
    }
  }
}

TEST_CASE("blossom matches the subset DP on larger graphs") {
  oracle::Gen gen(42);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 2 * gen.between(6, 10);
    const auto w = trial % 3 == 0 ? gen.weights(n, 3, 1) : gen.weights(n, 1000, 12);
    const auto dp = subset_dp_perfect_matching(w);
    const auto bl = blossom_perfect_matching(w);
    check_perfect(bl, n);
    CHECK(bl.total == dp.total);
    CHECK(total_of(w, bl) == bl.total);
  }
}

TEST_CASE("blossom on graphs beyond the DP limit") {
  oracle::Gen gen(43);
  for (int trial = 0; trial < 5; ++trial) {
    const std::size_t n = 60;
    const auto w = gen.weights(n, 50, 1);
    const auto m = min_weight_perfect_matching(w);
    check_perfect(m, n);
    // a planted cheap perfect matching is found exactly
    WeightMatrix planted(n);
    const auto p = gen.perm(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) planted.set(i, j, w.at(i, j) + 100);
    for (std::size_t i = 0; i < n; i += 2) planted.set(p[i], p[i + 1], 1);
    CHECK(min_weight_perfect_matching(planted).total == Rational(static_cast<long>(n / 2)));
  }
}

TEST_CASE("matching invariances") {
  oracle::Gen gen(44);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 * gen.between(1, 5);
    const auto w = gen.weights(n, 30, 4);
    const Rational best = min_weight_perfect_matching(w).total;

    // relabeling the vertices
    const auto p = gen.perm(n);
    WeightMatrix r(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) r.set(p[i], p[j], w.at(i, j));
    CHECK(min_weight_perfect_matching(r).total == best);

    // adding a constant to every edge
    const Rational c(static_cast<long>(gen.between(1, 9)), 7);
    WeightMatrix s(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) s.set(i, j, w.at(i, j) + c);
    CHECK(min_weight_perfect_matching(s).total == best + c * static_cast<long>(n / 2));
    CHECK(blossom_perfect_matching(s).total == best + c * static_cast<long>(n / 2));
  }
}

TEST_CASE("DP breaks ties lexicographically") {
  // every perfect matching on four vertices costs the same
  WeightMatrix w(4);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = i + 1; j < 4; ++j) w.set(i, j, 1);
  const auto m = subset_dp_perfect_matching(w);
  CHECK(m.pairs == std::vector<std::pair<std::size_t, std::size_t>>{{0, 1}, {2, 3}});
  CHECK(m.partners() == std::vector<std::size_t>{1, 0, 3, 2});
}

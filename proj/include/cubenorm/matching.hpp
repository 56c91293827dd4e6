#pragma once

#include "cubenorm/rational.hpp"

#include <cstddef>
#include <tuple>
#include <utility>
#include <vector>

namespace cubenorm {

/// Symmetric weights of a complete graph on n vertices. The diagonal is unused.
class WeightMatrix {
 public:
  WeightMatrix() : WeightMatrix(0) {}
  explicit WeightMatrix(std::size_t n);

  std::size_t size() const { return n_; }
  const Rational& at(std::size_t i, std::size_t j) const { return w_[i * n_ + j]; }
  /// Sets both (i, j) and (j, i). Weights must be nonnegative.
  void set(std::size_t i, std::size_t j, const Rational& w);

 private:
  std::size_t n_;
  std::vector<Rational> w_;
};

struct Matching {
  /// Each pair is (smaller, larger); pairs are sorted by their first vertex.
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  Rational total;

  /// partner[v] for every vertex.
  std::vector<std::size_t> partners() const;
};

/// Exact minimum-weight perfect matching. Requires an even vertex count.
///
/// Up to kSubsetDpLimit vertices this uses a subset dynamic program that
/// returns the lexicographically first optimum (vertex 0 takes the smallest
/// partner that still allows an optimal completion, and so on). Larger
/// graphs go to the blossom solver.
Matching min_weight_perfect_matching(const WeightMatrix& w);

inline constexpr std::size_t kSubsetDpLimit = 20;

/// Subset dynamic program over vertex sets, O(2^n n). n <= 24.
Matching subset_dp_perfect_matching(const WeightMatrix& w);

/// Edmonds' weighted blossom algorithm, O(n^3).
Matching blossom_perfect_matching(const WeightMatrix& w);

/// Enumerates all (n-1)!! perfect matchings. n <= 12; verification only.
Matching brute_force_matching(const WeightMatrix& w);

namespace detail {

/// Rescales rational weights to a common integer denominator.
/// Returns the integer matrix (row-major) and the scale.
std::pair<std::vector<long long>, BigInt> integer_weights(const WeightMatrix& w);

/// Maximum-weight matching over a general graph with integer edge weights.
/// With `max_cardinality`, only maximum-cardinality matchings are considered.
/// Returns mate[v] or -1.
std::vector<long> max_weight_matching(std::size_t n,
                                      const std::vector<std::tuple<long, long, long long>>& edges,
                                      bool max_cardinality);

}  // namespace detail

}  // namespace cubenorm

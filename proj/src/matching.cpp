#include "cubenorm/matching.hpp"

#include "cubenorm/cube.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <numeric>
#include <string>

namespace cubenorm {

namespace {

void require_even(const WeightMatrix& w) {
  if (w.size() % 2 != 0)
    throw CubeError("perfect matching needs an even vertex count, got " +
                    std::to_string(w.size()));
}

Matching finish(const WeightMatrix& w, std::vector<std::pair<std::size_t, std::size_t>> pairs) {
  Matching m;
  for (auto& [a, b] : pairs) {
    if (a > b) std::swap(a, b);
    m.total += w.at(a, b);
  }
  std::sort(pairs.begin(), pairs.end());
  m.pairs = std::move(pairs);
  return m;
}

}  // namespace

WeightMatrix::WeightMatrix(std::size_t n) : n_(n), w_(n * n, Rational(0)) {}

void WeightMatrix::set(std::size_t i, std::size_t j, const Rational& w) {
  if (i >= n_ || j >= n_) throw CubeError("weight index out of range");
  if (i == j) throw CubeError("matching weights have no diagonal");
  if (w < 0) throw CubeError("matching weights must be nonnegative");
  w_[i * n_ + j] = w;
  w_[j * n_ + i] = w;
}

std::vector<std::size_t> Matching::partners() const {
  std::vector<std::size_t> p(pairs.size() * 2);
  for (auto [a, b] : pairs) {
    p[a] = b;
    p[b] = a;
  }
  return p;
}

namespace detail {

std::pair<std::vector<long long>, BigInt> integer_weights(const WeightMatrix& w) {
  const std::size_t n = w.size();
  BigInt scale = 1;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      scale = boost::multiprecision::lcm(scale, boost::multiprecision::denominator(w.at(i, j)));
  // Leaves head room for dual-variable sums inside the blossom solver.
  const BigInt limit = BigInt(1) << 52;
  std::vector<long long> out(n * n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const Rational& r = w.at(i, j);
      BigInt v = boost::multiprecision::numerator(r) * (scale / boost::multiprecision::denominator(r));
      if (v > limit) throw CubeError("matching weights too large for exact integer solving");
      out[i * n + j] = v.convert_to<long long>();
    }
  }
  return {std::move(out), scale};
}

}  // namespace detail

Matching subset_dp_perfect_matching(const WeightMatrix& w) {
  require_even(w);
  const std::size_t n = w.size();
  if (n > 24) throw CubeError("subset dynamic program limited to 24 vertices");
  if (n == 0) return {};
  const auto [iw, scale] = detail::integer_weights(w);
  const std::uint32_t full = (std::uint32_t{1} << n) - 1;
  constexpr long long kUnset = -1;
  // best[S] = minimum cost to perfectly match the vertex set S.
  std::vector<long long> best(std::size_t{1} << n, kUnset);
  best[0] = 0;
  // Sets are built by adding pairs whose smaller vertex is the lowest vertex
  // of the set, so iterating masks in increasing order is enough.
  for (std::uint32_t s = 1; s <= full; ++s) {
    if (std::popcount(s) % 2 != 0) continue;
    const int i = std::countr_zero(s);
    const std::uint32_t rest = s & ~(std::uint32_t{1} << i);
    long long b = std::numeric_limits<long long>::max();
    for (std::uint32_t r = rest; r; r &= r - 1) {
      const int j = std::countr_zero(r);
      const long long sub = best[rest & ~(std::uint32_t{1} << j)];
      b = std::min(b, iw[i * n + j] + sub);
    }
    best[s] = b;
  }
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::uint32_t s = full; s;) {
    const int i = std::countr_zero(s);
    const std::uint32_t rest = s & ~(std::uint32_t{1} << i);
    for (std::uint32_t r = rest; r; r &= r - 1) {
      const int j = std::countr_zero(r);
      const std::uint32_t next = rest & ~(std::uint32_t{1} << j);
      if (iw[i * n + j] + best[next] == best[s]) {
        pairs.emplace_back(i, j);
        s = next;
        break;
      }
    }
  }
  return finish(w, std::move(pairs));
}

Matching blossom_perfect_matching(const WeightMatrix& w) {
  require_even(w);
  const std::size_t n = w.size();
  if (n == 0) return {};
  const auto [iw, scale] = detail::integer_weights(w);
  long long top = 0;
  for (auto v : iw) top = std::max(top, v);
  // Maximizing (top + 1 - w) over maximum-cardinality matchings minimizes w.
  std::vector<std::tuple<long, long, long long>> edges;
  edges.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      edges.emplace_back(static_cast<long>(i), static_cast<long>(j), top + 1 - iw[i * n + j]);
  const auto mate = detail::max_weight_matching(n, edges, true);
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t v = 0; v < n; ++v) {
    if (mate[v] < 0) throw CubeError("blossom solver returned an imperfect matching");
    if (static_cast<std::size_t>(mate[v]) > v) pairs.emplace_back(v, mate[v]);
  }
  return finish(w, std::move(pairs));
}

Matching min_weight_perfect_matching(const WeightMatrix& w) {
  require_even(w);
  if (w.size() <= kSubsetDpLimit) return subset_dp_perfect_matching(w);
  return blossom_perfect_matching(w);
}

Matching brute_force_matching(const WeightMatrix& w) {
  require_even(w);
  const std::size_t n = w.size();
  if (n > 12) throw CubeError("brute-force matching limited to 12 vertices");
  if (n == 0) return {};
  std::vector<std::pair<std::size_t, std::size_t>> current, best_pairs;
  Rational best_total = -1;
  std::vector<bool> used(n, false);
  // Recursion pairs the lowest free vertex with each remaining free vertex.
  auto recurse = [&](auto&& self, const Rational& acc) -> void {
    std::size_t i = 0;
    while (i < n && used[i]) ++i;
    if (i == n) {
      if (best_total < 0 || acc < best_total) {
        best_total = acc;
        best_pairs = current;
      }
      return;
    }
    used[i] = true;
    for (std::size_t j = i + 1; j < n; ++j) {
      if (used[j]) continue;
      used[j] = true;
      current.emplace_back(i, j);
      self(self, acc + w.at(i, j));
      current.pop_back();
      used[j] = false;
    }
    used[i] = false;
  };
  recurse(recurse, Rational(0));
  return finish(w, std::move(best_pairs));
}

}  // namespace cubenorm

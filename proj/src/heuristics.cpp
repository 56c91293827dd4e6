#include "cubenorm/heuristics.hpp"

#include <algorithm>
#include <numeric>

namespace cubenorm {

Permutation sort_by_keys(const std::vector<Rational>& keys, SortDirection direction) {
  std::vector<Index> order(keys.size());
  std::iota(order.begin(), order.end(), Index{0});
  if (direction == SortDirection::ascending)
    std::stable_sort(order.begin(), order.end(),
                     [&](Index a, Index b) { return keys[a] < keys[b]; });
  else
    std::stable_sort(order.begin(), order.end(),
                     [&](Index a, Index b) { return keys[a] > keys[b]; });
  return Permutation(std::move(order));
}

Normalization slice_sort(const std::vector<SliceSortKey>& keys, const CubeDims& dims,
                         SortDirection direction) {
  if (keys.size() != dims.rank()) throw CubeError("need one key list per dimension");
  std::vector<Permutation> perms;
  for (std::size_t j = 0; j < dims.rank(); ++j) {
    const auto& k = keys[j];
    if (k.dim != j || k.keys.size() != dims.extent(j))
      throw CubeError("key list " + std::to_string(j) + " does not match its dimension");
    perms.push_back(sort_by_keys(k.keys, direction));
  }
  return Normalization(std::move(perms));
}

Normalization frequency_sort(const SparseCube& cube, SortDirection direction) {
  std::vector<SliceSortKey> keys;
  for (std::size_t j = 0; j < cube.rank(); ++j) {
    SliceSortKey k{j, {}};
    for (auto c : cube.slice_counts(j)) k.keys.emplace_back(c);
    keys.push_back(std::move(k));
  }
  return slice_sort(keys, cube.dims(), direction);
}

Normalization frequency_sort(const FractionalAllocationCube& cube, SortDirection direction) {
  std::vector<SliceSortKey> keys;
  for (std::size_t j = 0; j < cube.rank(); ++j) keys.push_back({j, cube.slice_sums(j)});
  return slice_sort(keys, cube.dims(), direction);
}

// ---------------------------------------------------------------------------

GsTrace greedy_sort_trace(const SparseCube& cube, const CostParams& params,
                          std::size_t max_phases) {
  if (cube.empty()) throw CubeError("greedy sort needs at least one allocated cell");
  const std::size_t d = cube.rank();
  const auto& dims = cube.dims();

  GsState state;
  state.break_even = 1 / params.sparse_cell_cost(d);
  for (std::size_t i = 0; i < d; ++i) {
    state.dense.emplace_back(dims.extent(i), true);
    state.rho.emplace_back(dims.extent(i), Rational(0));
  }
  std::vector<std::size_t> dense_size(dims.extents());

  std::vector<GsStep> steps;
  bool converged = false;
  std::vector<std::size_t> counts;
  for (std::size_t phase = 0; phase < max_phases; ++phase) {
    bool changed = false;
    for (std::size_t i = 0; i < d; ++i) {
      // Count cells of each slice of i whose other coordinates are all dense.
      counts.assign(dims.extent(i), 0);
      for (std::size_t c = 0; c < cube.cell_count(); ++c) {
        auto cell = cube.cell(c);
        bool inside = true;
        for (std::size_t j = 0; j < d && inside; ++j)
          if (j != i && !state.dense[j][cell[j]]) inside = false;
        if (inside) ++counts[cell[i]];
      }
      BigInt area = 1;
      for (std::size_t j = 0; j < d; ++j)
        if (j != i) area *= dense_size[j];

      auto& rho = state.rho[i];
      auto& dense = state.dense[i];
      for (std::size_t v = 0; v < dims.extent(i); ++v) {
        rho[v] = Rational(BigInt(counts[v]), area);
        const bool want = rho[v] >= state.break_even;
        if (want != dense[v]) {
          dense[v] = want;
          changed = true;
          want ? ++dense_size[i] : --dense_size[i];
        }
      }
      bool reinstated = false;
      if (dense_size[i] == 0) {
        const auto best = std::max_element(rho.begin(), rho.end()) - rho.begin();
        dense[best] = true;
        dense_size[i] = 1;
        reinstated = true;
      }
      GsStep step{phase, i, {}, rho, reinstated};
      for (Index v = 0; v < dense.size(); ++v)
        if (dense[v]) step.dense_values.push_back(v);
      steps.push_back(std::move(step));
    }
    state.phase = phase + 1;
    if (!changed) {
      converged = true;
      break;
    }
  }

  std::vector<Permutation> perms;
  for (std::size_t i = 0; i < d; ++i)
    perms.push_back(sort_by_keys(state.rho[i], SortDirection::descending));
  return GsTrace{std::move(steps), std::move(state), converged, Normalization(std::move(perms))};
}

Normalization greedy_sort(const SparseCube& cube, const CostParams& params,
                          std::size_t max_phases) {
  return greedy_sort_trace(cube, params, max_phases).normalization;
}

// ---------------------------------------------------------------------------

PairingWeights pairing_weights(const SparseCube& cube, std::size_t dim, const CostParams& params) {
  if (dim >= cube.rank()) throw CubeError("dimension out of range");
  const std::size_t d = cube.rank();
  const std::size_t n = cube.dims().extent(dim);

  PairingWeights pw;
  pw.dim = dim;
  pw.slice_counts = cube.slice_counts(dim);
  pw.benefit.assign(n * n, 0);

  // Key each cell by its position inside the slice followed by its slice label.
  std::vector<Index> keyed(cube.flat().size());
  for (std::size_t c = 0; c < cube.cell_count(); ++c) {
    auto cell = cube.cell(c);
    Index* out = keyed.data() + c * d;
    for (std::size_t j = 0, k = 0; j < d; ++j)
      if (j != dim) out[k++] = cell[j];
    out[d - 1] = cell[dim];
  }
  std::vector<std::size_t> order(cube.cell_count());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::lexicographical_compare(keyed.begin() + a * d, keyed.begin() + (a + 1) * d,
                                        keyed.begin() + b * d, keyed.begin() + (b + 1) * d);
  });
  auto same_position = [&](std::size_t a, std::size_t b) {
    return std::equal(keyed.begin() + a * d, keyed.begin() + a * d + (d - 1),
                      keyed.begin() + b * d);
  };
  for (std::size_t g = 0; g < order.size();) {
    std::size_t end = g + 1;
    while (end < order.size() && same_position(order[g], order[end])) ++end;
    for (std::size_t a = g; a < end; ++a) {
      const Index va = keyed[order[a] * d + d - 1];
      for (std::size_t b = a + 1; b < end; ++b) {
        const Index vb = keyed[order[b] * d + d - 1];
        ++pw.benefit[va * n + vb];
        ++pw.benefit[vb * n + va];
      }
    }
    g = end;
  }

  const Rational unit = params.sparse_cell_cost(d);
  const Rational c_half = std::min(Rational(2), unit);
  const Rational c_full = std::min(Rational(2), Rational(2 * unit));
  // A slice left over by an odd extent sits in clipped blocks of one cell.
  pw.unpaired_cost_per_cell = std::min(Rational(1), unit);
  pw.matrix = WeightMatrix(n);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      const std::size_t shared = pw.benefit[a * n + b];
      const std::size_t single = pw.slice_counts[a] + pw.slice_counts[b] - 2 * shared;
      pw.matrix.set(a, b, c_full * shared + c_half * single);
    }
  }
  return pw;
}

Permutation pair_slices(const SparseCube& cube, std::size_t dim, const CostParams& params,
                        PairOrder pair_order) {
  const auto pw = pairing_weights(cube, dim, params);
  const std::size_t n = pw.slice_counts.size();
  if (n == 1) return Permutation::identity(1);

  const bool padded = n % 2 != 0;
  const std::size_t m = padded ? n + 1 : n;
  WeightMatrix w(m);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b) w.set(a, b, pw.matrix.at(a, b));
  if (padded)
    for (std::size_t a = 0; a < n; ++a)
      w.set(a, n, pw.unpaired_cost_per_cell * pw.slice_counts[a]);

  const auto matching = min_weight_perfect_matching(w);

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::optional<std::size_t> leftover;
  for (auto [a, b] : matching.pairs) {
    if (padded && b == n)
      leftover = a;
    else
      pairs.emplace_back(std::min(a, b), std::max(a, b));
  }
  std::sort(pairs.begin(), pairs.end());
  if (pair_order == PairOrder::by_count)
    std::stable_sort(pairs.begin(), pairs.end(), [&](const auto& x, const auto& y) {
      return pw.slice_counts[x.first] + pw.slice_counts[x.second] >
             pw.slice_counts[y.first] + pw.slice_counts[y.second];
    });
  std::vector<Index> order;
  order.reserve(n);
  for (auto [a, b] : pairs) {
    order.push_back(static_cast<Index>(a));
    order.push_back(static_cast<Index>(b));
  }
  if (leftover) order.push_back(static_cast<Index>(*leftover));
  return Permutation(std::move(order));
}

Normalization optimal_size2(const SparseCube& cube, std::size_t dim, const CostParams& params) {
  if (dim >= cube.rank()) throw CubeError("dimension out of range");
  std::vector<Permutation> perms;
  for (std::size_t j = 0; j < cube.rank(); ++j)
    perms.push_back(j == dim ? pair_slices(cube, dim, params)
                             : Permutation::identity(cube.dims().extent(j)));
  return Normalization(std::move(perms));
}

Normalization iterated_matching(const SparseCube& cube, const CostParams& params,
                                PairOrder order) {
  Normalization total = Normalization::identity(cube.dims());
  SparseCube current = cube;
  for (std::size_t k = 0; k < cube.rank(); ++k) {
    std::vector<Permutation> perms;
    for (std::size_t j = 0; j < cube.rank(); ++j)
      perms.push_back(j == k ? pair_slices(current, k, params, order)
                             : Permutation::identity(cube.dims().extent(j)));
    const Normalization step(std::move(perms));
    current = apply(step, current);
    // current == apply(step, apply(total, cube)) == apply(compose(step, total), cube)
    total = compose(step, total);
  }
  return total;
}

// ---------------------------------------------------------------------------

Heuristic parse_heuristic(const std::string& name) {
  if (name == "fs") return Heuristic::fs;
  if (name == "gs") return Heuristic::gs;
  if (name == "im") return Heuristic::im;
  if (name == "size2-exact") return Heuristic::size2_exact;
  throw CubeError("unknown heuristic '" + name + "' (expected fs, gs, im or size2-exact)");
}

std::string heuristic_name(Heuristic h) {
  switch (h) {
    case Heuristic::fs: return "fs";
    case Heuristic::gs: return "gs";
    case Heuristic::im: return "im";
    case Heuristic::size2_exact: return "size2-exact";
  }
  return "?";
}

Normalization run_heuristic(Heuristic h, const SparseCube& cube, const CostParams& params,
                            std::optional<std::size_t> dim) {
  switch (h) {
    case Heuristic::fs:
      return frequency_sort(cube);
    case Heuristic::gs:
      if (cube.empty()) return Normalization::identity(cube.dims());
      return greedy_sort(cube, params);
    case Heuristic::im:
      return iterated_matching(cube, params);
    case Heuristic::size2_exact:
      if (dim) return optimal_size2(cube, *dim, params);
      return iterated_matching(cube, params);
  }
  throw CubeError("unknown heuristic");
}

}  // namespace cubenorm

#include "cubenorm/stats.hpp"

namespace cubenorm {

namespace {

void require_cells(const SparseCube& cube, const char* what) {
  if (cube.empty()) throw CubeError(std::string(what) + " is undefined for an empty cube");
}

std::vector<std::vector<std::size_t>> all_slice_counts(const SparseCube& cube) {
  std::vector<std::vector<std::size_t>> counts;
  for (std::size_t j = 0; j < cube.rank(); ++j) counts.push_back(cube.slice_counts(j));
  return counts;
}

}  // namespace

std::vector<DimDistribution> dim_distributions(const SparseCube& cube) {
  require_cells(cube, "a frequency distribution");
  const auto n = cube.cell_count();
  std::vector<DimDistribution> out;
  for (std::size_t j = 0; j < cube.rank(); ++j) {
    DimDistribution dist{j, {}};
    for (auto c : cube.slice_counts(j)) dist.probs.emplace_back(c, n);
    out.push_back(std::move(dist));
  }
  return out;
}

FractionalAllocationCube joint_probability_cube(const SparseCube& cube) {
  require_cells(cube, "the joint probability distribution");
  FractionalAllocationCube psi(cube.dims());
  const Rational p(1, cube.cell_count());
  for (auto& t : cube.tuples()) psi.set(std::move(t), p);
  return psi;
}

FractionalAllocationCube independent_allocation_cube(const SparseCube& cube, bool cap) {
  require_cells(cube, "the joint independent distribution");
  const auto counts = all_slice_counts(cube);
  const std::size_t d = cube.rank();
  const BigInt n = cube.cell_count();
  BigInt denom = 1;
  for (std::size_t j = 1; j < d; ++j) denom *= n;  // #C * prod(count/#C) = prod(count) / #C^(d-1)

  // Only slices with a nonzero count contribute: iterate their product.
  std::vector<std::vector<Index>> support(d);
  for (std::size_t j = 0; j < d; ++j)
    for (Index v = 0; v < counts[j].size(); ++v)
      if (counts[j][v] > 0) support[j].push_back(v);

  FractionalAllocationCube out(cube.dims());
  std::vector<std::size_t> pos(d, 0);
  std::vector<Index> coord(d);
  while (true) {
    BigInt num = 1;
    for (std::size_t j = 0; j < d; ++j) {
      coord[j] = support[j][pos[j]];
      num *= counts[j][coord[j]];
    }
    Rational v(num, denom);
    if (cap && v > 1) v = 1;
    out.set(coord, v);
    std::size_t j = d;
    while (j-- > 0) {
      if (++pos[j] < support[j].size()) break;
      pos[j] = 0;
    }
    if (j == static_cast<std::size_t>(-1)) break;
  }
  return out;
}

Rational independence_sum(const SparseCube& cube) {
  require_cells(cube, "the independence sum");
  const auto counts = all_slice_counts(cube);
  const std::size_t d = cube.rank();
  BigInt num = 0;
  for (std::size_t i = 0; i < cube.cell_count(); ++i) {
    auto c = cube.cell(i);
    BigInt term = 1;
    for (std::size_t j = 0; j < d; ++j) term *= counts[j][c[j]];
    num += term;
  }
  BigInt denom = 1;
  for (std::size_t j = 0; j < d; ++j) denom *= cube.cell_count();
  return Rational(num, denom);
}

IndependenceReport fs_bound(const SparseCube& cube, const CostParams& params) {
  IndependenceReport r;
  r.independence_sum = independence_sum(cube);
  r.cell_count = cube.cell_count();
  r.bound = params.sparse_cell_cost(cube.rank()) * (1 - r.independence_sum) * r.cell_count;
  return r;
}

}  // namespace cubenorm

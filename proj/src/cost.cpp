#include "cubenorm/cost.hpp"

#include <algorithm>
#include <string>

namespace cubenorm {

namespace {

void check_arity(const CubeDims& dims, const BlockShape& shape) {
  if (dims.rank() != shape.rank()) {
    throw CubeError("block shape has arity " + std::to_string(shape.rank()) +
                    " but the cube has " + std::to_string(dims.rank()) + " dimensions");
  }
}

std::vector<std::size_t> grid_extents(const CubeDims& dims, const BlockShape& shape) {
  std::vector<std::size_t> g(dims.rank());
  for (std::size_t j = 0; j < g.size(); ++j)
    g[j] = (dims.extent(j) + shape.extent(j) - 1) / shape.extent(j);
  return g;
}

std::size_t clipped_cells(const CubeDims& dims, const BlockShape& shape,
                          const std::vector<std::size_t>& origin) {
  std::size_t m = 1;
  for (std::size_t j = 0; j < origin.size(); ++j) {
    const std::size_t start = origin[j] * shape.extent(j);
    m *= std::min(shape.extent(j), dims.extent(j) - start);
  }
  return m;
}

constexpr std::size_t kDenseGridLimit = std::size_t{1} << 22;

}  // namespace

BlockShape::BlockShape(std::vector<std::size_t> extents) : extents_(std::move(extents)) {
  if (extents_.empty()) throw CubeError("block shape needs at least one dimension");
  for (auto m : extents_)
    if (m == 0) throw CubeError("block extents must be positive");
}

BlockShape BlockShape::regular(std::size_t rank, std::size_t m) {
  return BlockShape(std::vector<std::size_t>(rank, m));
}

BlockShape BlockShape::pair_along(std::size_t rank, std::size_t dim) {
  std::vector<std::size_t> e(rank, 1);
  e.at(dim) = 2;
  return BlockShape(std::move(e));
}

CostParams::CostParams(Rational a) : alpha(std::move(a)) {
  if (alpha < 0) throw CubeError("alpha must be nonnegative");
}

FractionalAllocationCube::FractionalAllocationCube(CubeDims dims) : dims_(std::move(dims)) {}

FractionalAllocationCube FractionalAllocationCube::strict(const SparseCube& cube) {
  FractionalAllocationCube a(cube.dims());
  for (auto& t : cube.tuples()) a.values_.emplace(std::move(t), Rational(1));
  return a;
}

void FractionalAllocationCube::set(std::vector<Index> coord, Rational value) {
  if (coord.size() != rank()) throw CubeError("coordinate arity does not match the cube");
  for (std::size_t j = 0; j < rank(); ++j)
    if (coord[j] >= dims_.extent(j))
      throw CubeError("coordinate out of range in dimension " + std::to_string(j));
  if (value < 0) throw CubeError("allocation values must be nonnegative");
  if (value == 0)
    values_.erase(coord);
  else
    values_[std::move(coord)] = std::move(value);
}

Rational FractionalAllocationCube::at(const std::vector<Index>& coord) const {
  auto it = values_.find(coord);
  return it == values_.end() ? Rational(0) : it->second;
}

Rational FractionalAllocationCube::total() const {
  Rational s = 0;
  for (const auto& [_, v] : values_) s += v;
  return s;
}

std::vector<Rational> FractionalAllocationCube::slice_sums(std::size_t dim) const {
  if (dim >= rank()) throw CubeError("dimension out of range");
  std::vector<Rational> sums(dims_.extent(dim), Rational(0));
  for (const auto& [c, v] : values_) sums[c[dim]] += v;
  return sums;
}

FractionalAllocationCube apply(const Normalization& norm, const FractionalAllocationCube& cube) {
  if (!norm.matches(cube.dims()))
    throw CubeError("normalization does not match the cube dimensions");
  std::vector<Permutation> inverse;
  for (const auto& p : norm.perms()) inverse.push_back(p.inverse());
  FractionalAllocationCube out(cube.dims());
  for (const auto& [c, v] : cube.values()) {
    std::vector<Index> t(c.size());
    for (std::size_t j = 0; j < c.size(); ++j) t[j] = inverse[j][c[j]];
    out.set(std::move(t), v);
  }
  return out;
}

void for_each_block(const CubeDims& dims, const BlockShape& shape,
                    const std::function<void(const BlockView&)>& visit) {
  check_arity(dims, shape);
  const auto grid = grid_extents(dims, shape);
  const std::size_t d = grid.size();
  BlockView view;
  view.origin.assign(d, 0);
  view.extents.assign(d, 0);
  while (true) {
    view.cells = 1;
    for (std::size_t j = 0; j < d; ++j) {
      view.extents[j] =
          std::min(shape.extent(j), dims.extent(j) - view.origin[j] * shape.extent(j));
      view.cells *= view.extents[j];
    }
    visit(view);
    std::size_t j = d;
    while (j-- > 0) {
      if (++view.origin[j] < grid[j]) break;
      view.origin[j] = 0;
    }
    if (j == static_cast<std::size_t>(-1)) return;
  }
}

std::vector<BlockView> block_grid(const CubeDims& dims, const BlockShape& shape) {
  std::vector<BlockView> out;
  for_each_block(dims, shape, [&](const BlockView& b) { out.push_back(b); });
  return out;
}

BigInt block_count(const CubeDims& dims, const BlockShape& shape) {
  check_arity(dims, shape);
  BigInt n = 1;
  for (auto g : grid_extents(dims, shape)) n *= g;
  return n;
}

Rational block_cost(std::size_t block_cells, const Rational& allocated, std::size_t rank,
                    const CostParams& params) {
  Rational sparse = params.sparse_cell_cost(rank) * allocated;
  Rational dense(block_cells);
  return sparse < dense ? sparse : dense;
}

BlockEncoding classify_block(std::size_t block_cells, const Rational& allocated,
                             std::size_t rank, const CostParams& params) {
  if (allocated == 0) return BlockEncoding::empty;
  return params.sparse_cell_cost(rank) * allocated > block_cells ? BlockEncoding::dense
                                                                  : BlockEncoding::sparse;
}

std::map<std::vector<std::size_t>, std::size_t> block_occupancy(const SparseCube& cube,
                                                                const BlockShape& shape) {
  check_arity(cube.dims(), shape);
  const std::size_t d = cube.rank();
  std::map<std::vector<std::size_t>, std::size_t> occ;
  std::vector<std::size_t> key(d);
  for (std::size_t i = 0; i < cube.cell_count(); ++i) {
    auto c = cube.cell(i);
    for (std::size_t j = 0; j < d; ++j) key[j] = c[j] / shape.extent(j);
    ++occ[key];
  }
  return occ;
}

Rational holap_cost(const SparseCube& cube, const BlockShape& shape, const CostParams& params) {
  check_arity(cube.dims(), shape);
  const std::size_t d = cube.rank();
  const auto grid = grid_extents(cube.dims(), shape);

  // Exact integer form: with alpha = p/q each block costs min(qM, (q + pd) D) / q.
  const BigInt p = boost::multiprecision::numerator(params.alpha);
  const BigInt q = boost::multiprecision::denominator(params.alpha);
  const BigInt sparse_unit = q + p * d;
  BigInt total = 0;
  auto add_block = [&](const std::vector<std::size_t>& origin, std::size_t allocated) {
    BigInt dense = q * clipped_cells(cube.dims(), shape, origin);
    BigInt sparse = sparse_unit * allocated;
    total += sparse < dense ? sparse : dense;
  };

  BigInt cells = block_count(cube.dims(), shape);
  if (cells <= kDenseGridLimit) {
    std::vector<std::uint32_t> counts(static_cast<std::size_t>(cells), 0);
    for (std::size_t i = 0; i < cube.cell_count(); ++i) {
      auto c = cube.cell(i);
      std::size_t lin = 0;
      for (std::size_t j = 0; j < d; ++j) lin = lin * grid[j] + c[j] / shape.extent(j);
      ++counts[lin];
    }
    std::vector<std::size_t> origin(d);
    for (std::size_t lin = 0; lin < counts.size(); ++lin) {
      if (counts[lin] == 0) continue;
      std::size_t rest = lin;
      for (std::size_t j = d; j-- > 0;) {
        origin[j] = rest % grid[j];
        rest /= grid[j];
      }
      add_block(origin, counts[lin]);
    }
  } else {
    for (const auto& [origin, n] : block_occupancy(cube, shape)) add_block(origin, n);
  }
  return Rational(total, q);
}

Rational per_cell_cost(const SparseCube& cube, const BlockShape& shape, const CostParams& params) {
  if (cube.empty()) {
    check_arity(cube.dims(), shape);
    return Rational(1);
  }
  return holap_cost(cube, shape, params) / cube.cell_count();
}

Rational fractional_holap_cost(const FractionalAllocationCube& cube, const BlockShape& shape,
                               const CostParams& params) {
  check_arity(cube.dims(), shape);
  const std::size_t d = cube.rank();
  std::map<std::vector<std::size_t>, Rational> sums;
  std::vector<std::size_t> key(d);
  for (const auto& [c, v] : cube.values()) {
    if (v < 0) throw CubeError("negative allocation value");
    for (std::size_t j = 0; j < d; ++j) key[j] = c[j] / shape.extent(j);
    sums[key] += v;
  }
  Rational total = 0;
  for (const auto& [origin, s] : sums)
    total += block_cost(clipped_cells(cube.dims(), shape, origin), s, d, params);
  return total;
}

EncodingSummary encoding_summary(const SparseCube& cube, const BlockShape& shape,
                                 const CostParams& params) {
  EncodingSummary out;
  const auto occ = block_occupancy(cube, shape);
  for (const auto& [origin, n] : occ) {
    if (classify_block(clipped_cells(cube.dims(), shape, origin), Rational(n), cube.rank(),
                       params) == BlockEncoding::dense)
      ++out.dense;
    else
      ++out.sparse;
  }
  out.empty = block_count(cube.dims(), shape) - occ.size();
  return out;
}

}  // namespace cubenorm

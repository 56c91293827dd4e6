#pragma once

#include "cubenorm/cube.hpp"
#include "cubenorm/rational.hpp"

#include <cstddef>
#include <functional>
#include <map>
#include <vector>

namespace cubenorm {

/// Block extents m_1..m_d.
class BlockShape {
 public:
  explicit BlockShape(std::vector<std::size_t> extents);
  /// m along every one of `rank` dimensions.
  static BlockShape regular(std::size_t rank, std::size_t m);
  /// 2 along `dim`, 1 elsewhere.
  static BlockShape pair_along(std::size_t rank, std::size_t dim);

  std::size_t rank() const { return extents_.size(); }
  std::size_t extent(std::size_t dim) const { return extents_.at(dim); }
  const std::vector<std::size_t>& extents() const { return extents_; }

  friend bool operator==(const BlockShape&, const BlockShape&) = default;

 private:
  std::vector<std::size_t> extents_;
};

/// Storing one allocated cell sparsely costs 1 + alpha * d.
struct CostParams {
  Rational alpha{1, 2};

  CostParams() = default;
  explicit CostParams(Rational a);

  /// 1 + alpha * d.
  Rational sparse_cell_cost(std::size_t rank) const { return 1 + alpha * rank; }
};

/// A fractional allocation cube: cell values in [0, 1], absent cells are 0.
class FractionalAllocationCube {
 public:
  explicit FractionalAllocationCube(CubeDims dims);

  /// The strict allocation cube of `cube` (1 on every allocated cell).
  static FractionalAllocationCube strict(const SparseCube& cube);

  const CubeDims& dims() const { return dims_; }
  std::size_t rank() const { return dims_.rank(); }

  /// Throws CubeError for out-of-range coordinates or negative values.
  /// Zero removes the cell. Values above 1 are accepted so that uncapped
  /// independent allocation cubes can be represented.
  void set(std::vector<Index> coord, Rational value);
  Rational at(const std::vector<Index>& coord) const;

  const std::map<std::vector<Index>, Rational>& values() const { return values_; }
  /// #A, the sum of all cell values.
  Rational total() const;
  /// Sum of values in slice `value` of dimension `dim`.
  std::vector<Rational> slice_sums(std::size_t dim) const;

 private:
  CubeDims dims_;
  std::map<std::vector<Index>, Rational> values_;
};

FractionalAllocationCube apply(const Normalization& norm, const FractionalAllocationCube& cube);

enum class BlockEncoding { empty, sparse, dense };

/// One block of the grid with its extents clipped at the cube boundary.
struct BlockView {
  std::vector<std::size_t> origin;   ///< block-grid coordinates
  std::vector<std::size_t> extents;  ///< clipped extents
  std::size_t cells = 0;             ///< clipped M
};

/// Calls `visit` once per block, in row-major block-grid order.
void for_each_block(const CubeDims& dims, const BlockShape& shape,
                    const std::function<void(const BlockView&)>& visit);
std::vector<BlockView> block_grid(const CubeDims& dims, const BlockShape& shape);
BigInt block_count(const CubeDims& dims, const BlockShape& shape);

/// Cost of one block: min(M, (1 + alpha d) D).
Rational block_cost(std::size_t block_cells, const Rational& allocated, std::size_t rank,
                    const CostParams& params);
/// Dense iff (1 + alpha d) D > M; ties and empty-of-choice cases report sparse.
BlockEncoding classify_block(std::size_t block_cells, const Rational& allocated,
                             std::size_t rank, const CostParams& params);

/// H(C): sum over blocks of min(M, (1 + alpha d) D).
Rational holap_cost(const SparseCube& cube, const BlockShape& shape,
                    const CostParams& params = {});
/// E(C) = H(C) / #C, and 1 for an empty cube.
Rational per_cell_cost(const SparseCube& cube, const BlockShape& shape,
                       const CostParams& params = {});
/// H(A) for a fractional allocation cube, using per-block sums D̂.
Rational fractional_holap_cost(const FractionalAllocationCube& cube, const BlockShape& shape,
                               const CostParams& params = {});

/// Allocated-cell count of every non-empty block, keyed by block-grid origin.
std::map<std::vector<std::size_t>, std::size_t> block_occupancy(const SparseCube& cube,
                                                                const BlockShape& shape);

/// Number of dense, sparse and empty blocks under the min() rule.
struct EncodingSummary {
  BigInt dense = 0;
  BigInt sparse = 0;
  BigInt empty = 0;
};
EncodingSummary encoding_summary(const SparseCube& cube, const BlockShape& shape,
                                 const CostParams& params = {});

}  // namespace cubenorm

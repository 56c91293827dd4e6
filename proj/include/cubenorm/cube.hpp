#pragma once

#include "cubenorm/rational.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace cubenorm {

using Index = std::uint32_t;

/// Thrown for malformed cubes, normalizations and mismatched arities.
class CubeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Extents n_1..n_d of a cube. Every extent is at least one.
class CubeDims {
 public:
  explicit CubeDims(std::vector<std::size_t> extents);

  std::size_t rank() const { return extents_.size(); }
  std::size_t extent(std::size_t dim) const { return extents_.at(dim); }
  const std::vector<std::size_t>& extents() const { return extents_; }

  /// Product of extents; exact even when it overflows 64 bits.
  BigInt volume() const;

  friend bool operator==(const CubeDims&, const CubeDims&) = default;

 private:
  std::vector<std::size_t> extents_;
};

/// A slice C^dim_value: all cells whose coordinate along `dim` is `value`.
struct SliceRef {
  std::size_t dim;
  Index value;
};

/// Allocation pattern of a data cube. Measures are not stored: only which
/// cells are allocated matters for normalization.
///
/// Cells are kept sorted lexicographically and unique in one flat buffer of
/// `rank()` indices per cell.
class SparseCube {
 public:
  explicit SparseCube(CubeDims dims);

  /// Builds a cube from coordinate tuples. Duplicates collapse; any tuple
  /// with the wrong arity or an out-of-range coordinate throws CubeError
  /// naming the tuple and the dimension.
  static SparseCube from_tuples(const std::vector<std::vector<Index>>& coords,
                                CubeDims dims);

  /// Same as from_tuples but takes a flat row-major buffer of rank() indices
  /// per cell.
  static SparseCube from_flat(std::vector<Index> flat, CubeDims dims);

  /// Cells of a 0/1 row-major matrix (or higher-rank array).
  static SparseCube from_dense(const std::vector<int>& values, CubeDims dims);

  const CubeDims& dims() const { return dims_; }
  std::size_t rank() const { return dims_.rank(); }
  std::size_t cell_count() const { return rank() == 0 ? 0 : flat_.size() / rank(); }
  bool empty() const { return flat_.empty(); }

  std::span<const Index> cell(std::size_t i) const {
    return {flat_.data() + i * rank(), rank()};
  }
  const std::vector<Index>& flat() const { return flat_; }

  bool contains(std::span<const Index> coord) const;

  /// #Ĉ^j_v for a single slice.
  std::size_t slice_count(SliceRef s) const;
  /// #Ĉ^j_v for every value v of dimension j.
  std::vector<std::size_t> slice_counts(std::size_t dim) const;

  /// #C / (n_1 ... n_d).
  Rational density() const;

  std::vector<std::vector<Index>> tuples() const;

  friend bool operator==(const SparseCube& a, const SparseCube& b) {
    return a.dims_ == b.dims_ && a.flat_ == b.flat_;
  }

 private:
  SparseCube(CubeDims dims, std::vector<Index> sorted_unique_flat);
  static std::vector<Index> canonicalize(std::vector<Index> flat, std::size_t rank);

  CubeDims dims_;
  std::vector<Index> flat_;
};

/// A bijection on {0..n-1}. Entry i is the source index shown at result
/// index i.
class Permutation {
 public:
  explicit Permutation(std::vector<Index> mapping);
  static Permutation identity(std::size_t n);

  std::size_t size() const { return map_.size(); }
  Index operator[](std::size_t i) const { return map_[i]; }
  const std::vector<Index>& mapping() const { return map_; }

  Permutation inverse() const;
  bool is_identity() const;

  friend bool operator==(const Permutation&, const Permutation&) = default;

 private:
  std::vector<Index> map_;
};

/// One permutation per dimension. apply() follows
///   pi(C)[i_1..i_d] = C[g_1(i_1) .. g_d(i_d)].
class Normalization {
 public:
  explicit Normalization(std::vector<Permutation> perms);
  static Normalization identity(const CubeDims& dims);

  std::size_t rank() const { return perms_.size(); }
  const Permutation& perm(std::size_t dim) const { return perms_.at(dim); }
  const std::vector<Permutation>& perms() const { return perms_; }

  bool matches(const CubeDims& dims) const;
  bool is_identity() const;

  friend bool operator==(const Normalization&, const Normalization&) = default;

 private:
  std::vector<Permutation> perms_;
};

SparseCube apply(const Normalization& norm, const SparseCube& cube);

/// apply(compose(a, b), C) == apply(a, apply(b, C)).
Normalization compose(const Normalization& a, const Normalization& b);
Normalization invert(const Normalization& a);

/// Number of distinct cubes reachable from `cube` by normalization:
/// prod over dimensions of n_r! / prod_i n_{r,i}! where n_{r,i} counts
/// identical slices.
BigInt equivalence_class_cardinality(const SparseCube& cube);

}  // namespace cubenorm

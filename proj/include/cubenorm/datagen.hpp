#pragma once

#include "cubenorm/cost.hpp"
#include "cubenorm/cube.hpp"

#include <cstdint>

namespace cubenorm {

/// SplitMix64. Small, portable and bit-identical everywhere; every generator
/// below derives an independent child stream per unit of work with
/// derive_seed(seed, stream).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next();
  /// Uniform integer in [0, bound). bound > 0. Unbiased (rejection).
  std::uint64_t below(std::uint64_t bound);
  /// True with probability p exactly, for p = a/b with b < 2^64.
  bool bernoulli(const Rational& p);

 private:
  std::uint64_t state_;
};

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

/// Kernel cube: every block is independently full with `block_fill_prob`,
/// otherwise empty. Block b (row-major over the block grid) draws from
/// stream b.
struct KernelSpec {
  std::vector<std::size_t> dims;
  std::vector<std::size_t> block;
  Rational block_fill_prob{1, 2};
  std::uint64_t seed = 0;
};

/// Flips each cell's allocation status with `flip_prob`. Cell row r (all
/// coordinates but the last, row-major) draws from stream r.
struct NoiseSpec {
  Rational flip_prob{3, 100};
  std::uint64_t seed = 0;
};

SparseCube kernel_cube(const KernelSpec& spec);
bool is_kernel(const SparseCube& cube, const BlockShape& block);
SparseCube add_noise(const SparseCube& cube, const NoiseSpec& spec);
/// Outer product S_1 x ... x S_d: value v of dimension j is kept with
/// `value_prob` (stream j); a dimension that keeps nothing keeps one value.
SparseCube outer_product_cube(const CubeDims& dims, const Rational& value_prob,
                              std::uint64_t seed);
/// Uniform Fisher-Yates permutation per dimension j, drawn from stream j.
Normalization random_normalization(const CubeDims& dims, std::uint64_t seed);

}  // namespace cubenorm

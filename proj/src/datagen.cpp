#include "cubenorm/datagen.hpp"

#include <limits>

namespace cubenorm {

namespace {

void check_probability(const Rational& p, const char* what) {
  if (p < 0 || p > 1) throw CubeError(std::string(what) + " must lie in [0, 1]");
}

}  // namespace

std::uint64_t Rng::next() {
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound == 0) throw CubeError("empty range");
  const std::uint64_t threshold = (0 - bound) % bound;  // 2^64 mod bound
  while (true) {
    const std::uint64_t r = next();
    if (r >= threshold) return r % bound;
  }
}

bool Rng::bernoulli(const Rational& p) {
  check_probability(p, "probability");
  if (p == 0) return false;
  if (p == 1) return true;
  const BigInt num = boost::multiprecision::numerator(p);
  const BigInt den = boost::multiprecision::denominator(p);
  if (den > std::numeric_limits<std::uint64_t>::max())
    throw CubeError("probability denominator too large");
  return below(den.convert_to<std::uint64_t>()) < num.convert_to<std::uint64_t>();
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  Rng mix(seed ^ (0xd1b54a32d192ed03ULL * (stream + 1)));
  mix.next();
  return mix.next();
}

SparseCube kernel_cube(const KernelSpec& spec) {
  CubeDims dims(spec.dims);
  BlockShape block(spec.block);
  check_probability(spec.block_fill_prob, "block fill probability");
  std::vector<Index> flat;
  std::uint64_t stream = 0;
  for_each_block(dims, block, [&](const BlockView& b) {
    Rng rng(derive_seed(spec.seed, stream++));
    if (!rng.bernoulli(spec.block_fill_prob)) return;
    const std::size_t d = dims.rank();
    std::vector<Index> coord(d);
    std::vector<std::size_t> offset(d, 0);
    while (true) {
      for (std::size_t j = 0; j < d; ++j)
        coord[j] = static_cast<Index>(b.origin[j] * block.extent(j) + offset[j]);
      flat.insert(flat.end(), coord.begin(), coord.end());
      std::size_t j = d;
      while (j-- > 0) {
        if (++offset[j] < b.extents[j]) break;
        offset[j] = 0;
      }
      if (j == static_cast<std::size_t>(-1)) break;
    }
  });
  return SparseCube::from_flat(std::move(flat), std::move(dims));
}

bool is_kernel(const SparseCube& cube, const BlockShape& block) {
  for (const auto& [origin, n] : block_occupancy(cube, block)) {
    std::size_t m = 1;
    for (std::size_t j = 0; j < origin.size(); ++j)
      m *= std::min(block.extent(j), cube.dims().extent(j) - origin[j] * block.extent(j));
    if (n != m) return false;
  }
  return true;
}

SparseCube add_noise(const SparseCube& cube, const NoiseSpec& spec) {
  check_probability(spec.flip_prob, "flip probability");
  const auto& dims = cube.dims();
  const std::size_t d = dims.rank();
  const std::size_t last = dims.extent(d - 1);
  std::vector<Index> flat;
  std::vector<Index> coord(d, 0);
  std::uint64_t row = 0;
  while (true) {
    Rng rng(derive_seed(spec.seed, row++));
    for (Index v = 0; v < last; ++v) {
      coord[d - 1] = v;
      const bool allocated = cube.contains(coord);
      if (allocated != rng.bernoulli(spec.flip_prob))
        flat.insert(flat.end(), coord.begin(), coord.end());
    }
    std::size_t j = d - 1;
    while (j-- > 0) {
      if (++coord[j] < dims.extent(j)) break;
      coord[j] = 0;
    }
    if (j == static_cast<std::size_t>(-1)) break;
  }
  return SparseCube::from_flat(std::move(flat), dims);
}

SparseCube outer_product_cube(const CubeDims& dims, const Rational& value_prob,
                              std::uint64_t seed) {
  check_probability(value_prob, "value probability");
  const std::size_t d = dims.rank();
  std::vector<std::vector<Index>> keep(d);
  for (std::size_t j = 0; j < d; ++j) {
    Rng rng(derive_seed(seed, j));
    for (Index v = 0; v < dims.extent(j); ++v)
      if (rng.bernoulli(value_prob)) keep[j].push_back(v);
    if (keep[j].empty()) keep[j].push_back(static_cast<Index>(rng.below(dims.extent(j))));
  }
  std::vector<Index> flat;
  std::vector<std::size_t> at(d, 0);
  while (true) {
    for (std::size_t j = 0; j < d; ++j) flat.push_back(keep[j][at[j]]);
    std::size_t j = d;
    while (j-- > 0) {
      if (++at[j] < keep[j].size()) break;
      at[j] = 0;
    }
    if (j == static_cast<std::size_t>(-1)) break;
  }
  return SparseCube::from_flat(std::move(flat), dims);
}

Normalization random_normalization(const CubeDims& dims, std::uint64_t seed) {
  std::vector<Permutation> perms;
  for (std::size_t j = 0; j < dims.rank(); ++j) {
    Rng rng(derive_seed(seed, j));
    std::vector<Index> p(dims.extent(j));
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = static_cast<Index>(i);
    for (std::size_t i = p.size(); i > 1; --i) std::swap(p[i - 1], p[rng.below(i)]);
    perms.emplace_back(std::move(p));
  }
  return Normalization(std::move(perms));
}

}  // namespace cubenorm

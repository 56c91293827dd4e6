#include "cubenorm/cost.hpp"
#include "cubenorm/stats.hpp"

#include "fixtures.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <set>

using namespace cubenorm;

namespace {
const BlockShape b22({2, 2});
}

TEST_CASE("holap cost of the reference 4x4 cubes") {
  CHECK(holap_cost(fixture::checkerboard(), b22) == 16);
  CHECK(holap_cost(fixture::matrix({"1100", "1100", "0011", "0011"}), b22) == 8);
  // As printed this layout spreads its four cells over three blocks: 4 + 2 + 2.
  // Six needs (1,1), (2,1), (2,2) in one block, e.g. rows and columns 1,2 moved together.
  CHECK(holap_cost(fixture::four_cells(), b22) == 8);
  const Permutation p({1, 2, 0, 3});
  CHECK(holap_cost(apply(Normalization({p, p}), fixture::four_cells()), b22) == 6);
  CHECK(holap_cost(fixture::identity4(), b22) == 8);
}

TEST_CASE("per-cell cost") {
  CHECK(per_cell_cost(SparseCube(CubeDims({4, 4})), b22) == 1);
  CHECK(per_cell_cost(fixture::matrix({"1111", "1111"}), b22) == 1);
  CHECK(per_cell_cost(fixture::matrix({"1010", "0000", "0010", "0000"}), b22) == 2);
  CHECK(per_cell_cost(fixture::checkerboard(), b22) == 2);
}

TEST_CASE("alpha changes the sparse cell cost") {
  const auto c = fixture::matrix({"1000", "0000", "0000", "0000"});
  CHECK(holap_cost(c, b22, CostParams(Rational(0))) == 1);
  CHECK(holap_cost(c, b22, CostParams(Rational(1, 4))) == Rational(3, 2));
  CHECK(holap_cost(c, b22, CostParams(Rational(3))) == 4);  // dense wins: min(4, 7)
  CHECK_THROWS_AS(CostParams(Rational(-1)), CubeError);
}

TEST_CASE("block grid") {
  CHECK(block_grid(CubeDims({4, 4}), b22).size() == 4);
  for (const auto& b : block_grid(CubeDims({4, 4}), b22)) CHECK(b.cells == 4);

  const auto g = block_grid(CubeDims({5, 3}), b22);
  REQUIRE(g.size() == 6);
  std::multiset<std::size_t> ms;
  for (const auto& b : g) ms.insert(b.cells);
  CHECK(ms == std::multiset<std::size_t>{4, 2, 4, 2, 2, 1});
  CHECK(g.back().extents == std::vector<std::size_t>{1, 1});

  CHECK(block_count(CubeDims({12, 12, 12, 12}), BlockShape::regular(4, 2)) == 1296);
  CHECK_THROWS_AS(block_grid(CubeDims({4, 4, 4}), b22), CubeError);
}

TEST_CASE("classification reports sparse at the tie") {
  // d = 2: sparse cost 2 per cell; M = 4 so D = 2 is a tie
  CHECK(classify_block(4, 2, 2, {}) == BlockEncoding::sparse);
  CHECK(classify_block(4, 3, 2, {}) == BlockEncoding::dense);
  CHECK(classify_block(4, 0, 2, {}) == BlockEncoding::empty);
  CHECK(block_cost(4, 2, 2, {}) == 4);
  const auto s = encoding_summary(fixture::matrix({"1110", "1100", "0000", "0001"}), b22);
  CHECK(s.dense == 1);
  CHECK(s.sparse == 2);
  CHECK(s.empty == 1);
}

TEST_CASE("holap cost agrees with the dense oracle") {
  oracle::Gen gen(21);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t d = gen.between(1, 4);
    std::vector<std::size_t> ext(d), blk(d);
    for (std::size_t j = 0; j < d; ++j) {
      ext[j] = gen.between(1, 7);
      blk[j] = gen.between(1, 4);
    }
    const auto c = gen.cube(ext, gen.unit());
    const Rational alpha(static_cast<long>(gen.between(0, 6)), static_cast<long>(gen.between(1, 4)));
    CHECK(holap_cost(c, BlockShape(blk), CostParams(alpha)) == oracle::cost(c, blk, alpha));
  }
}

TEST_CASE("sparse grid path for huge extents") {
  // 2^20 x 2^20 with 2x2 blocks has far too many blocks for a dense count array.
  const CubeDims dims({1u << 20, 1u << 20});
  const auto c =
      SparseCube::from_tuples({{0, 0}, {0, 1}, {1, 0}, {7, 7}, {(1u << 20) - 1, 5}}, dims);
  // block (0,0) holds 3 cells -> dense 4; the others are single sparse cells at 2 each
  CHECK(holap_cost(c, b22) == 8);
  CHECK(block_occupancy(c, b22).size() == 3);
}

TEST_CASE("cost bounds and invariances") {
  oracle::Gen gen(22);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t d = gen.between(1, 3);
    std::vector<std::size_t> ext(d), blk(d);
    for (std::size_t j = 0; j < d; ++j) {
      blk[j] = gen.between(1, 3);
      ext[j] = blk[j] * gen.between(1, 3);
    }
    const auto c = gen.cube(ext, gen.unit());
    const BlockShape shape(blk);
    const Rational h = holap_cost(c, shape);
    const Rational unit = 1 + Rational(static_cast<long>(d), 2);

    // shapes dividing the extents: #C <= H <= volume and 1 <= E <= d/2 + 1
    CHECK(h >= c.cell_count());
    CHECK(h <= c.dims().volume());
    if (!c.empty()) {
      CHECK(per_cell_cost(c, shape) >= 1);
      CHECK(per_cell_cost(c, shape) <= unit);
    }
    CHECK(h <= unit * c.cell_count());
    std::size_t m = 1;
    for (auto x : blk) m *= x;
    CHECK(h <= Rational(static_cast<long>(block_occupancy(c, shape).size() * m)));

    // permuting whole blocks, and cells inside each block position, keeps H
    std::vector<Permutation> perms;
    for (std::size_t j = 0; j < d; ++j) {
      const std::size_t groups = ext[j] / blk[j];
      const auto gp = gen.perm(groups), inner = gen.perm(blk[j]);
      std::vector<Index> p;
      for (auto g : gp)
        for (auto i : inner) p.push_back(static_cast<Index>(g * blk[j] + i));
      perms.emplace_back(std::move(p));
    }
    CHECK(holap_cost(apply(Normalization(std::move(perms)), c), shape) == h);
  }
}

TEST_CASE("fractional cost") {
  CHECK(fractional_holap_cost(FractionalAllocationCube(CubeDims({4, 4})), b22) == 0);
  CHECK(fractional_holap_cost(independent_allocation_cube(fixture::checkerboard()), b22) == 16);
  CHECK_THROWS_AS(FractionalAllocationCube(CubeDims({2, 2})).set({0, 0}, Rational(-1, 2)),
                  CubeError);

  oracle::Gen gen(23);
  for (int trial = 0; trial < 100; ++trial) {
    const std::vector<std::size_t> ext{gen.between(1, 6), gen.between(1, 6)};
    const auto c = gen.cube(ext, gen.unit());
    const auto strict = FractionalAllocationCube::strict(c);
    CHECK(fractional_holap_cost(strict, b22) == holap_cost(c, b22));
    CHECK(strict.total() == c.cell_count());

    // scaling allocated cells down never raises the cost
    FractionalAllocationCube a(c.dims());
    for (const auto& t : c.tuples())
      a.set(t, Rational(static_cast<long>(gen.between(1, 8)), 8));
    CHECK(fractional_holap_cost(a, b22) <= holap_cost(c, b22));

    // normalizations act on fractional cubes the same way
    const auto n = gen.normalization(c.dims());
    CHECK(fractional_holap_cost(apply(n, strict), b22) == holap_cost(apply(n, c), b22));
  }
}

#pragma once

#include "cubenorm/cost.hpp"
#include "cubenorm/cube.hpp"

#include <vector>

namespace cubenorm {

/// phi^j: the fraction of allocated cells that fall in each slice of `dim`.
struct DimDistribution {
  std::size_t dim = 0;
  std::vector<Rational> probs;
};

/// Suboptimality report for Frequency Sort.
struct IndependenceReport {
  Rational independence_sum;
  Rational bound;  ///< (1 + alpha d)(1 - IS) #C
  std::size_t cell_count = 0;
};

/// All statistical operations reject empty cubes with CubeError.
std::vector<DimDistribution> dim_distributions(const SparseCube& cube);

/// Psi: 1/#C on every allocated cell.
FractionalAllocationCube joint_probability_cube(const SparseCube& cube);

/// Phi * #C, where Phi is the product of the per-dimension distributions.
/// Values are capped at 1 unless `cap` is false.
FractionalAllocationCube independent_allocation_cube(const SparseCube& cube, bool cap = true);

/// Phi . B: the scalar product of the joint independent distribution with
/// the strict allocation cube.
Rational independence_sum(const SparseCube& cube);

IndependenceReport fs_bound(const SparseCube& cube, const CostParams& params = {});

}  // namespace cubenorm

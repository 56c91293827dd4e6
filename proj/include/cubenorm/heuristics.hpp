#pragma once

#include "cubenorm/cost.hpp"
#include "cubenorm/cube.hpp"
#include "cubenorm/matching.hpp"

#include <optional>
#include <string>
#include <vector>

namespace cubenorm {

// ---------------------------------------------------------------------------
// Slice sorting
// ---------------------------------------------------------------------------

enum class SortDirection { ascending, descending };

/// Per-value sort keys f^j_v for one dimension.
struct SliceSortKey {
  std::size_t dim = 0;
  std::vector<Rational> keys;
};

/// Orders values by key in `direction`; equal keys keep their original order.
Permutation sort_by_keys(const std::vector<Rational>& keys, SortDirection direction);

/// Generic slice-sorting normalization: one key list per dimension.
Normalization slice_sort(const std::vector<SliceSortKey>& keys, const CubeDims& dims,
                         SortDirection direction);

/// Frequency Sort: every dimension ordered by slice allocation count.
/// Most frequent first by default; ties keep original order.
Normalization frequency_sort(const SparseCube& cube,
                             SortDirection direction = SortDirection::descending);
/// Frequency Sort over a fractional cube, keyed by slice sums.
Normalization frequency_sort(const FractionalAllocationCube& cube,
                             SortDirection direction = SortDirection::descending);

// ---------------------------------------------------------------------------
// Greedy Sort
// ---------------------------------------------------------------------------

/// Dense-value sets and the most recent restricted densities.
struct GsState {
  std::vector<std::vector<bool>> dense;   ///< dense[i][v]: v is in Delta_i
  std::vector<std::vector<Rational>> rho; ///< last computed rho_v per dimension
  Rational break_even;
  std::size_t phase = 0;                  ///< completed phases
};

/// Snapshot taken after one dimension pass.
struct GsStep {
  std::size_t phase = 0;
  std::size_t dim = 0;
  std::vector<Index> dense_values;  ///< Delta_dim after the pass
  std::vector<Rational> rho;        ///< rho_v for every v of dim
  bool reinstated = false;          ///< Delta_dim emptied and an argmax was put back
};

struct GsTrace {
  std::vector<GsStep> steps;
  GsState final_state;
  bool converged = false;
  Normalization normalization;
};

/// Greedy Sort with break-even density 1 / (1 + alpha d). Stops early once
/// a full phase leaves every Delta unchanged. Throws on an empty cube.
Normalization greedy_sort(const SparseCube& cube, const CostParams& params = {},
                          std::size_t max_phases = 20);
GsTrace greedy_sort_trace(const SparseCube& cube, const CostParams& params = {},
                          std::size_t max_phases = 20);

// ---------------------------------------------------------------------------
// Matching-based normalization
// ---------------------------------------------------------------------------

/// Costs of pairing slices of dimension `dim` into blocks of two.
struct PairingWeights {
  std::size_t dim = 0;
  std::vector<std::size_t> slice_counts;
  std::vector<std::size_t> benefit;  ///< n x n, shared allocated positions
  WeightMatrix matrix;               ///< n x n pairing costs
  Rational unpaired_cost_per_cell;   ///< cost of a slice left alone (odd n)
};

/// Builds benefits by sorting cells on their in-slice position, then
/// counting every slice pair inside each equal-position group.
/// weight(v, v') = c_full * benefit + c_half * (#v + #v' - 2 benefit) with
/// c_half = min(2, 1 + alpha d) and c_full = min(2, 2(1 + alpha d)).
PairingWeights pairing_weights(const SparseCube& cube, std::size_t dim,
                               const CostParams& params = {});

/// Where matched pairs go. by_index lists pairs by their smaller original
/// index; by_count puts the pair with the most cells first, which also
/// clusters pairs for blocks wider than two but changes nothing for size 2.
enum class PairOrder { by_index, by_count };

/// Matches slices of `dim` into pairs and returns the permutation placing
/// each pair on an even boundary, lower index first within a pair. With an
/// odd extent the slice matched to the padding vertex goes last.
Permutation pair_slices(const SparseCube& cube, std::size_t dim, const CostParams& params = {},
                        PairOrder order = PairOrder::by_index);

/// Optimal normalization for blocks 2 along `dim` and 1 elsewhere.
Normalization optimal_size2(const SparseCube& cube, std::size_t dim,
                            const CostParams& params = {});

/// Iterated Matching: pair_slices once per dimension, in order, each pass on
/// the cube produced by the previous ones.
Normalization iterated_matching(const SparseCube& cube, const CostParams& params = {},
                                PairOrder order = PairOrder::by_index);

// ---------------------------------------------------------------------------
// Dispatch by name
// ---------------------------------------------------------------------------

enum class Heuristic { fs, gs, im, size2_exact };

Heuristic parse_heuristic(const std::string& name);
std::string heuristic_name(Heuristic h);

/// size2-exact applies optimal_size2 to `dim`, or to every dimension in
/// turn when no dimension is given.
Normalization run_heuristic(Heuristic h, const SparseCube& cube, const CostParams& params = {},
                            std::optional<std::size_t> dim = std::nullopt);

}  // namespace cubenorm

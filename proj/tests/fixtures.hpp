#pragma once
// Small cubes used across the test suites.

#include "cubenorm/cube.hpp"

#include <string>
#include <vector>

namespace fixture {

using cubenorm::CubeDims;
using cubenorm::SparseCube;

inline SparseCube matrix(const std::vector<std::string>& rows) {
  std::vector<int> v;
  for (const auto& r : rows)
    for (char c : r) v.push_back(c == '1' ? 1 : 0);
  return SparseCube::from_dense(v, CubeDims({rows.size(), rows.front().size()}));
}

inline SparseCube checkerboard() { return matrix({"1010", "0101", "1010", "0101"}); }
inline SparseCube four_cells() { return matrix({"1000", "0100", "0110", "0000"}); }
inline SparseCube ten_cells() { return matrix({"1010", "0111", "1110", "0101"}); }
inline SparseCube identity4() { return matrix({"1000", "0100", "0010", "0001"}); }

/// Six rows r0..r5 over four positions.
inline SparseCube six_rows() {
  return matrix({"0000", "1101", "1000", "0110", "0100", "1001"});
}

/// Cities x experience bands: Ottawa, Toronto, Montreal, Halifax, Vancouver
/// against <1 yr, 1-2 yrs, >2 yrs.
inline SparseCube cities() {
  return matrix({"001", "001", "001", "110", "110"});
}

}  // namespace fixture

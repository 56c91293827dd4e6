#include "cubenorm/cube.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>
#include <string>

namespace cubenorm {

namespace {

std::string format_tuple(std::span<const Index> t) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) os << ", ";
    os << t[i];
  }
  os << ')';
  return os.str();
}

BigInt factorial(std::size_t n) {
  BigInt f = 1;
  for (std::size_t i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace

std::string to_string(const Rational& r) {
  const BigInt num = boost::multiprecision::numerator(r);
  const BigInt den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

Rational parse_rational(const std::string& text) {
  auto fail = [&]() -> Rational {
    throw CubeError("not a rational number: '" + text + "'");
  };
  if (text.empty()) return fail();
  try {
    if (auto slash = text.find('/'); slash != std::string::npos) {
      BigInt num(text.substr(0, slash));
      BigInt den(text.substr(slash + 1));
      if (den == 0) return fail();
      return Rational(num, den);
    }
    if (auto dot = text.find('.'); dot != std::string::npos) {
      std::string whole = text.substr(0, dot);
      std::string frac = text.substr(dot + 1);
      bool neg = !whole.empty() && whole[0] == '-';
      if (neg) whole.erase(0, 1);
      if (whole.empty()) whole = "0";
      if (frac.empty() || frac.find_first_not_of("0123456789") != std::string::npos ||
          whole.find_first_not_of("0123456789") != std::string::npos)
        return fail();
      BigInt den = 1;
      for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
      Rational r(BigInt(whole) * den + BigInt(frac), den);
      return neg ? Rational(-r) : r;
    }
    return Rational(BigInt(text));
  } catch (const std::runtime_error&) {
    return fail();
  }
}

CubeDims::CubeDims(std::vector<std::size_t> extents) : extents_(std::move(extents)) {
  if (extents_.empty()) throw CubeError("a cube needs at least one dimension");
  for (std::size_t j = 0; j < extents_.size(); ++j) {
    if (extents_[j] == 0)
      throw CubeError("extent of dimension " + std::to_string(j) + " must be positive");
  }
}

BigInt CubeDims::volume() const {
  BigInt v = 1;
  for (auto n : extents_) v *= n;
  return v;
}

SparseCube::SparseCube(CubeDims dims) : dims_(std::move(dims)) {}

SparseCube::SparseCube(CubeDims dims, std::vector<Index> sorted_unique_flat)
    : dims_(std::move(dims)), flat_(std::move(sorted_unique_flat)) {}

std::vector<Index> SparseCube::canonicalize(std::vector<Index> flat, std::size_t rank) {
  const std::size_t n = flat.size() / rank;
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  auto less = [&](std::size_t a, std::size_t b) {
    return std::lexicographical_compare(flat.begin() + a * rank, flat.begin() + (a + 1) * rank,
                                        flat.begin() + b * rank, flat.begin() + (b + 1) * rank);
  };
  auto equal = [&](std::size_t a, std::size_t b) {
    return std::equal(flat.begin() + a * rank, flat.begin() + (a + 1) * rank,
                      flat.begin() + b * rank);
  };
  std::sort(order.begin(), order.end(), less);
  std::vector<Index> out;
  out.reserve(flat.size());
  for (std::size_t k = 0; k < n; ++k) {
    if (k > 0 && equal(order[k], order[k - 1])) continue;
    out.insert(out.end(), flat.begin() + order[k] * rank, flat.begin() + (order[k] + 1) * rank);
  }
  return out;
}

SparseCube SparseCube::from_flat(std::vector<Index> flat, CubeDims dims) {
  const std::size_t d = dims.rank();
  if (flat.size() % d != 0)
    throw CubeError("flat coordinate buffer length is not a multiple of the rank");
  for (std::size_t i = 0; i < flat.size(); i += d) {
    for (std::size_t j = 0; j < d; ++j) {
      if (flat[i + j] >= dims.extent(j)) {
        throw CubeError("cell " + format_tuple({flat.data() + i, d}) +
                        " is out of range in dimension " + std::to_string(j) + " (extent " +
                        std::to_string(dims.extent(j)) + ")");
      }
    }
  }
  return SparseCube(std::move(dims), canonicalize(std::move(flat), d));
}

SparseCube SparseCube::from_tuples(const std::vector<std::vector<Index>>& coords,
                                   CubeDims dims) {
  const std::size_t d = dims.rank();
  std::vector<Index> flat;
  flat.reserve(coords.size() * d);
  for (const auto& t : coords) {
    if (t.size() != d) {
      throw CubeError("cell " + format_tuple(t) + " has arity " + std::to_string(t.size()) +
                      ", expected " + std::to_string(d));
    }
    flat.insert(flat.end(), t.begin(), t.end());
  }
  return from_flat(std::move(flat), std::move(dims));
}

SparseCube SparseCube::from_dense(const std::vector<int>& values, CubeDims dims) {
  if (BigInt(values.size()) != dims.volume())
    throw CubeError("dense buffer size does not match the cube volume");
  const std::size_t d = dims.rank();
  std::vector<Index> flat;
  std::vector<Index> coord(d, 0);
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (values[k] != 0) flat.insert(flat.end(), coord.begin(), coord.end());
    for (std::size_t j = d; j-- > 0;) {
      if (++coord[j] < dims.extent(j)) break;
      coord[j] = 0;
    }
  }
  // Row-major enumeration is already lexicographic.
  return SparseCube(std::move(dims), std::move(flat));
}

bool SparseCube::contains(std::span<const Index> coord) const {
  const std::size_t d = rank();
  if (coord.size() != d) return false;
  std::size_t lo = 0, hi = cell_count();
  while (lo < hi) {
    std::size_t mid = (lo + hi) / 2;
    auto c = cell(mid);
    if (std::lexicographical_compare(c.begin(), c.end(), coord.begin(), coord.end()))
      lo = mid + 1;
    else
      hi = mid;
  }
  return lo < cell_count() && std::equal(coord.begin(), coord.end(), cell(lo).begin());
}

std::size_t SparseCube::slice_count(SliceRef s) const {
  if (s.dim >= rank() || s.value >= dims_.extent(s.dim))
    throw CubeError("slice reference out of range");
  std::size_t count = 0;
  for (std::size_t i = s.dim; i < flat_.size(); i += rank()) count += flat_[i] == s.value;
  return count;
}

std::vector<std::size_t> SparseCube::slice_counts(std::size_t dim) const {
  if (dim >= rank()) throw CubeError("dimension out of range");
  std::vector<std::size_t> counts(dims_.extent(dim), 0);
  for (std::size_t i = dim; i < flat_.size(); i += rank()) ++counts[flat_[i]];
  return counts;
}

Rational SparseCube::density() const {
  return Rational(BigInt(cell_count()), dims_.volume());
}

std::vector<std::vector<Index>> SparseCube::tuples() const {
  std::vector<std::vector<Index>> out;
  out.reserve(cell_count());
  for (std::size_t i = 0; i < cell_count(); ++i) {
    auto c = cell(i);
    out.emplace_back(c.begin(), c.end());
  }
  return out;
}

Permutation::Permutation(std::vector<Index> mapping) : map_(std::move(mapping)) {
  std::vector<bool> seen(map_.size(), false);
  for (auto v : map_) {
    if (v >= map_.size() || seen[v]) throw CubeError("mapping is not a bijection");
    seen[v] = true;
  }
}

Permutation Permutation::identity(std::size_t n) {
  std::vector<Index> m(n);
  std::iota(m.begin(), m.end(), Index{0});
  return Permutation(std::move(m));
}

Permutation Permutation::inverse() const {
  std::vector<Index> inv(map_.size());
  for (std::size_t i = 0; i < map_.size(); ++i) inv[map_[i]] = static_cast<Index>(i);
  return Permutation(std::move(inv));
}

bool Permutation::is_identity() const {
  for (std::size_t i = 0; i < map_.size(); ++i)
    if (map_[i] != i) return false;
  return true;
}

Normalization::Normalization(std::vector<Permutation> perms) : perms_(std::move(perms)) {
  if (perms_.empty()) throw CubeError("a normalization needs at least one permutation");
}

Normalization Normalization::identity(const CubeDims& dims) {
  std::vector<Permutation> p;
  for (auto n : dims.extents()) p.push_back(Permutation::identity(n));
  return Normalization(std::move(p));
}

bool Normalization::matches(const CubeDims& dims) const {
  if (dims.rank() != rank()) return false;
  for (std::size_t j = 0; j < rank(); ++j)
    if (perms_[j].size() != dims.extent(j)) return false;
  return true;
}

bool Normalization::is_identity() const {
  return std::all_of(perms_.begin(), perms_.end(),
                     [](const Permutation& p) { return p.is_identity(); });
}

SparseCube apply(const Normalization& norm, const SparseCube& cube) {
  if (!norm.matches(cube.dims()))
    throw CubeError("normalization does not match the cube dimensions");
  const std::size_t d = cube.rank();
  std::vector<Permutation> inverse;
  inverse.reserve(d);
  for (const auto& p : norm.perms()) inverse.push_back(p.inverse());
  std::vector<Index> flat = cube.flat();
  for (std::size_t i = 0; i < flat.size(); ++i) flat[i] = inverse[i % d][flat[i]];
  return SparseCube::from_flat(std::move(flat), cube.dims());
}

Normalization compose(const Normalization& a, const Normalization& b) {
  if (a.rank() != b.rank()) throw CubeError("cannot compose normalizations of different rank");
  std::vector<Permutation> out;
  for (std::size_t j = 0; j < a.rank(); ++j) {
    const auto& pa = a.perm(j);
    const auto& pb = b.perm(j);
    if (pa.size() != pb.size())
      throw CubeError("cannot compose permutations of different length in dimension " +
                      std::to_string(j));
    std::vector<Index> m(pa.size());
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = pb[pa[i]];
    out.emplace_back(std::move(m));
  }
  return Normalization(std::move(out));
}

Normalization invert(const Normalization& a) {
  std::vector<Permutation> out;
  for (const auto& p : a.perms()) out.push_back(p.inverse());
  return Normalization(std::move(out));
}

BigInt equivalence_class_cardinality(const SparseCube& cube) {
  const std::size_t d = cube.rank();
  BigInt result = 1;
  for (std::size_t r = 0; r < d; ++r) {
    // A slice's identity is its set of cells with coordinate r removed.
    // The cell count goes along so that rank-1 slices (no coordinates left) still differ.
    std::vector<std::pair<std::size_t, std::vector<Index>>> slice(cube.dims().extent(r));
    for (std::size_t i = 0; i < cube.cell_count(); ++i) {
      auto c = cube.cell(i);
      auto& s = slice[c[r]];
      ++s.first;
      for (std::size_t j = 0; j < d; ++j)
        if (j != r) s.second.push_back(c[j]);
    }
    // Cells are lexicographic, so each projected slice is already in canonical order.
    std::map<std::pair<std::size_t, std::vector<Index>>, std::size_t> multiplicity;
    for (auto& s : slice) ++multiplicity[s];
    BigInt term = factorial(slice.size());
    for (const auto& [_, k] : multiplicity) term /= factorial(k);
    result *= term;
  }
  return result;
}

}  // namespace cubenorm

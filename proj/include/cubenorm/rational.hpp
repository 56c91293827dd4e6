#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

namespace cubenorm {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Rational make_rational(std::int64_t num, std::int64_t den = 1) {
  return Rational(num, den);
}

/// Lossy conversion for reports; all cost arithmetic stays exact.
inline double to_double(const Rational& r) { return r.convert_to<double>(); }

/// "p/q", or "p" when the denominator is 1.
std::string to_string(const Rational& r);

/// Parses "p", "p/q" or a finite decimal such as "0.5" exactly.
Rational parse_rational(const std::string& text);

}  // namespace cubenorm

#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace rtlab {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

// Absolute slack applied to closed geometric predicates (<= / >= stay closed).
inline constexpr double kGeomTol = 1e-9;

class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class InfeasiblePartition : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SizeLimitError : public std::length_error {
 public:
  using std::length_error::length_error;
};

inline std::string to_string(const Rational& r) {
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

inline Rational make_rational(std::int64_t num, std::int64_t den = 1) {
  if (den == 0) throw DomainError("zero denominator");
  return Rational(BigInt(num), BigInt(den));
}

}  // namespace rtlab

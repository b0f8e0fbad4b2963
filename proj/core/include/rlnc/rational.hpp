#pragma once

#include <cstdint>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace rlnc {

using BigInt = boost::multiprecision::cpp_int;
/// Always kept in lowest terms with a positive denominator.
using Rational = boost::multiprecision::cpp_rational;

inline BigInt numerator_of(const Rational& x) {
  return boost::multiprecision::numerator(x);
}
inline BigInt denominator_of(const Rational& x) {
  return boost::multiprecision::denominator(x);
}

BigInt big_pow(std::uint64_t base, std::uint64_t exponent);
Rational rational_pow(const Rational& base, std::uint64_t exponent);

/// "num/den".
std::string to_fraction_string(const Rational& x);

/// Decimal rendering with the given number of significant digits.
std::string to_decimal_string(const Rational& x, int significant_digits = 10);

double to_double(const Rational& x);

}  // namespace rlnc

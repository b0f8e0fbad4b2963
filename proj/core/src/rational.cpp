#include "rlnc/rational.hpp"

#include <iomanip>
#include <sstream>

#include <boost/multiprecision/cpp_dec_float.hpp>

namespace rlnc {

BigInt big_pow(std::uint64_t base, std::uint64_t exponent) {
  return boost::multiprecision::pow(BigInt(base), static_cast<unsigned>(exponent));
}

Rational rational_pow(const Rational& base, std::uint64_t exponent) {
  Rational result = 1;
  Rational b = base;
  while (exponent > 0) {
    if (exponent & 1) result *= b;
    b *= b;
    exponent >>= 1;
  }
  return result;
}

std::string to_fraction_string(const Rational& x) {
  return numerator_of(x).str() + "/" + denominator_of(x).str();
}

std::string to_decimal_string(const Rational& x, int significant_digits) {
  using Decimal = boost::multiprecision::cpp_dec_float_100;
  const Decimal value = Decimal(numerator_of(x)) / Decimal(denominator_of(x));
  std::ostringstream os;
  os << std::setprecision(significant_digits) << value;
  return os.str();
}

double to_double(const Rational& x) { return x.convert_to<double>(); }

}  // namespace rlnc

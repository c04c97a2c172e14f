#include "cegest/rational.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <system_error>

namespace cegest {

double log2_of(const Rational& r) {
  if (r == 0) return -std::numeric_limits<double>::infinity();
  const BigInt num = boost::multiprecision::numerator(r);
  const BigInt den = boost::multiprecision::denominator(r);
  // Split off the binary exponent so huge values do not overflow a double.
  const auto num_bits = static_cast<long>(boost::multiprecision::msb(num));
  const auto den_bits = static_cast<long>(boost::multiprecision::msb(den));
  const long shift_num = std::max(0L, num_bits - 60);
  const long shift_den = std::max(0L, den_bits - 60);
  const double n = static_cast<BigInt>(num >> shift_num).convert_to<double>();
  const double d = static_cast<BigInt>(den >> shift_den).convert_to<double>();
  return std::log2(n) - std::log2(d) + static_cast<double>(shift_num - shift_den);
}

std::string to_string(const Rational& r) {
  const BigInt den = boost::multiprecision::denominator(r);
  if (den == 1) return boost::multiprecision::numerator(r).str();
  return boost::multiprecision::numerator(r).str() + "/" + den.str();
}

std::string to_decimal(const Rational& r) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, to_double(r));
  return ec == std::errc() ? std::string(buf, ptr) : "nan";
}

}  // namespace cegest

#pragma once

#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace cegest {

using BigInt = boost::multiprecision::cpp_int;
/// Exact non-negative rational used for extension rates and path products.
using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

/// log2 of a rate; -inf for zero.
double log2_of(const Rational& r);

/// "num/den", or "num" when den == 1.
std::string to_string(const Rational& r);

/// Shortest decimal form that round-trips the double nearest to `r`.
std::string to_decimal(const Rational& r);

}  // namespace cegest

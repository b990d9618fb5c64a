#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <string>

namespace leafdim {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

// Floor division consistent with mathematical floor for negative values.
inline BigInt floor_div(const BigInt& num, const BigInt& den) {
  BigInt q = num / den;
  if ((num % den) != 0 && ((num < 0) != (den < 0))) --q;
  return q;
}

inline BigInt rat_floor(const BigRat& x) {
  return floor_div(numerator(x), denominator(x));
}

// Fractional part in [0, 1).
inline BigRat rat_frac(const BigRat& x) {
  return x - BigRat(rat_floor(x));
}

inline double rat_to_double(const BigRat& x) {
  return x.convert_to<double>();
}

// Exact embedding of a finite double into the rationals.
inline BigRat rat_from_double_exact(double x) {
  if (x == 0.0) return BigRat(0);
  int exp = 0;
  double mant = std::frexp(x, &exp);  // x = mant * 2^exp, |mant| in [0.5, 1)
  const auto mant_i = static_cast<std::int64_t>(std::ldexp(mant, 53));
  const int shift = exp - 53;
  BigRat r(mant_i);
  if (shift >= 0) {
    r *= BigRat(BigInt(1) << shift);
  } else {
    r /= BigRat(BigInt(1) << (-shift));
  }
  return r;
}

// Parses "1/3", "-2/5", "0.25", "3" into an exact rational.
BigRat parse_rational(const std::string& s);

std::string rational_to_string(const BigRat& x);

}  // namespace leafdim

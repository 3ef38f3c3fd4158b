#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

namespace grassfq {

// Expression templates are off: lambdas and `auto` locals must hold values,
// not expressions referring to temporaries.
using BigInt = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>, boost::multiprecision::et_off>;
// Always reduced, denominator > 0.
using QRational = boost::multiprecision::number<boost::multiprecision::cpp_rational_backend, boost::multiprecision::et_off>;

inline BigInt big_pow(const BigInt& base, unsigned exponent) {
  return boost::multiprecision::pow(base, exponent);
}

/// base^exponent for any integer exponent; base must be nonzero when exponent < 0.
inline QRational rat_pow(const QRational& base, long exponent) {
  QRational result = 1;
  QRational b = exponent >= 0 ? base : QRational(1) / base;
  unsigned long e = exponent >= 0 ? static_cast<unsigned long>(exponent)
                                  : static_cast<unsigned long>(-(exponent + 1)) + 1UL;
  while (e != 0) {
    if (e & 1UL) result *= b;
    e >>= 1;
    if (e != 0) b *= b;
  }
  return result;
}

/// q^exponent for an integer q; exact for negative exponents.
inline QRational q_power(std::int64_t q, long exponent) { return rat_pow(QRational(q), exponent); }

inline std::string to_string(const BigInt& v) { return v.str(); }

/// "num/den", or just "num" when the denominator is 1.
inline std::string to_string(const QRational& v) { return v.str(); }

inline double to_double(const QRational& v) { return v.convert_to<double>(); }

inline bool is_integer(const QRational& v) { return denominator(v) == 1; }

}  // namespace grassfq

#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace chirpsense {

// Arbitrary-precision signed integer. GMP supplies the arithmetic; the
// helpers below add the exact operations the rest of the library needs.
using ExactInt = mpz_class;

// Floor of the square root. Throws std::domain_error for negative input.
ExactInt isqrt(const ExactInt& n);

ExactInt pow10_int(unsigned long k);

// Floor division, denominator must be positive.
ExactInt floor_div(const ExactInt& num, const ExactInt& den);

// Ceiling division, denominator must be positive.
ExactInt ceil_div(const ExactInt& num, const ExactInt& den);

// Round-to-nearest division (ties away from zero), denominator positive.
ExactInt round_div(const ExactInt& num, const ExactInt& den);

// Number of decimal digits of |v| (>= 1; digits10(0) == 1).
std::size_t digits10(const ExactInt& v);

std::string to_decimal(const ExactInt& v);

// Parses an optionally signed decimal string; throws std::invalid_argument
// on anything else.
ExactInt from_decimal(const std::string& text);

// Conversion helpers that throw std::domain_error when the value does not fit.
std::int64_t to_int64(const ExactInt& v);
std::uint64_t to_uint64(const ExactInt& v);

double to_double(const ExactInt& v);

ExactInt gcd(const ExactInt& a, const ExactInt& b);

bool is_perfect_square(const ExactInt& n);

} // namespace chirpsense

#pragma once

#include "chirpsense/exact_int.hpp"
#include "chirpsense/fixed_point.hpp"

#include <string>

namespace chirpsense {

// Exact representation of (a + b*sqrt(d)) / c with b != 0, c > 0, d > 1 and
// d not a perfect square; gcd(a, b, c) == 1 after construction.
class QuadraticIrrational {
public:
    QuadraticIrrational(ExactInt a, ExactInt b, ExactInt c, ExactInt d);

    static QuadraticIrrational golden();           // (1 + sqrt(5)) / 2
    static QuadraticIrrational sqrt2();            // (0 + sqrt(2)) / 1
    static QuadraticIrrational sqrt3();            // (0 + sqrt(3)) / 1

    const ExactInt& a() const { return a_; }
    const ExactInt& b() const { return b_; }
    const ExactInt& c() const { return c_; }
    const ExactInt& d() const { return d_; }

    // Fixed-point evaluation with error_bound <= 2 * 10^-digits.
    CertifiedFixedPoint eval(unsigned long digits) const;

    int sign() const;                              // exact; never 0 (irrational)
    int cmp_rational(const ExactInt& p, const ExactInt& q) const; // vs p/q, q > 0
    int cmp(const QuadraticIrrational& rhs) const; // requires same d

    ExactInt floor() const;                        // exact

    QuadraticIrrational operator-() const;
    QuadraticIrrational add_int(const ExactInt& k) const;
    QuadraticIrrational mul_int(const ExactInt& k) const;    // k != 0
    QuadraticIrrational add(const QuadraticIrrational& rhs) const; // same d
    QuadraticIrrational frac() const;              // *this - floor(), in (0,1)
    QuadraticIrrational reflected_unit() const;    // 1 - *this

    bool operator==(const QuadraticIrrational& rhs) const;

    std::string to_string() const;

private:
    ExactInt a_, b_, c_, d_;
};

// ||m * q||: distance of m*q from the nearest integer, certified to
// 10^-target_digits. Working precision is digits10(m) + target_digits + 10.
// Propagates PrecisionError on a half-integer tie (never occurs for
// irrational q at sufficient digits; caller escalates).
CertifiedFixedPoint scaled_dist(const QuadraticIrrational& q, const ExactInt& m,
                                unsigned long target_digits = 30);

struct KhinchinResult {
    CertifiedFixedPoint c_min; // min over 1 <= j <= n of j * ||j q||
    ExactInt argmin_j;
};

// Empirical Khinchin constant: minimizes j * ||j q|| over 1..n. Precision
// escalates automatically until all comparisons are certified.
KhinchinResult khinchin_min(const QuadraticIrrational& q, const ExactInt& n,
                            unsigned long target_digits = 30);

// Shared high-precision evaluation: q is evaluated once, after which
// fractional parts and integer distances of m*q are exact integer work.
// Intended for scans with many multipliers up to max_multiplier.
class ScaledFracEvaluator {
public:
    ScaledFracEvaluator(const QuadraticIrrational& q, const ExactInt& max_multiplier,
                        unsigned long target_digits = 30);

    // ||m * q|| for 1 <= m <= max_multiplier.
    CertifiedFixedPoint dist(const ExactInt& m) const;
    // frac(m * q) in [0, 1).
    CertifiedFixedPoint frac(const ExactInt& m) const;
    double frac_double(const ExactInt& m) const;

    unsigned long scale() const { return scale_; }

private:
    ExactInt mantissa_;   // q * 10^scale, certified
    ExactInt err_units_;
    ExactInt ten_scale_;
    unsigned long scale_;
    ExactInt max_multiplier_;
};

} // namespace chirpsense

#pragma once

#include "chirpsense/exact_int.hpp"

#include <string>

namespace chirpsense {

// Decimal fixed-point value with a certified error bound:
//   value = mantissa * 10^-scale,  |true - value| <= err_units * 10^-scale.
// Every operation propagates the bound conservatively (rounding errors are
// absorbed into err_units). After normalize() the class invariant
// err_units <= 10 holds, i.e. error_bound <= 10^-(scale-1).
class CertifiedFixedPoint {
public:
    CertifiedFixedPoint() : mantissa_(0), scale_(0), err_units_(0) {}
    CertifiedFixedPoint(ExactInt mantissa, unsigned long scale, ExactInt err_units);

    // Exact rational p/q rendered at the given scale (q > 0; 1 ulp of error).
    static CertifiedFixedPoint from_rational(const ExactInt& p, const ExactInt& q,
                                             unsigned long scale);
    static CertifiedFixedPoint exact_int(const ExactInt& v);

    const ExactInt& mantissa() const { return mantissa_; }
    unsigned long scale() const { return scale_; }
    const ExactInt& err_units() const { return err_units_; }

    double value() const;
    double error_bound() const;
    bool is_exact() const { return err_units_ == 0; }

    CertifiedFixedPoint operator-() const;
    CertifiedFixedPoint abs() const;
    CertifiedFixedPoint operator+(const CertifiedFixedPoint& rhs) const;
    CertifiedFixedPoint operator-(const CertifiedFixedPoint& rhs) const;
    CertifiedFixedPoint mul_int(const ExactInt& k) const;
    CertifiedFixedPoint mul(const CertifiedFixedPoint& rhs) const;

    // Lower the scale, rounding the mantissa (never raises precision claims).
    CertifiedFixedPoint rescaled(unsigned long new_scale) const;

    // Three-way interval comparison: -1 if certainly less, +1 if certainly
    // greater, 0 if the certificates overlap.
    int cmp(const CertifiedFixedPoint& rhs) const;
    // Comparison against an exact rational p/q, q > 0. Same convention.
    int cmp_rational(const ExactInt& p, const ExactInt& q) const;

    std::string to_string() const;

private:
    ExactInt mantissa_;
    unsigned long scale_;
    ExactInt err_units_;

    void normalize();
    // Raise rhs to this scale (exact; only called with scale_ >= rhs.scale_).
    static CertifiedFixedPoint upscaled(const CertifiedFixedPoint& x, unsigned long scale);
};

struct NormDistResult {
    CertifiedFixedPoint dist; // distance to the nearest integer, in [0, 1/2]
    ExactInt nearest;
};

// Distance from the represented value to the closest integer together with
// that integer. Requires error_bound < 1/4. Throws PrecisionError when the
// value is indistinguishable from a half-integer at the carried precision.
NormDistResult norm_dist(const CertifiedFixedPoint& x);

} // namespace chirpsense

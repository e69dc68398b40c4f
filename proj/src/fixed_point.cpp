#include "chirpsense/fixed_point.hpp"

#include "chirpsense/errors.hpp"

#include <stdexcept>
#include <utility>

namespace chirpsense {

CertifiedFixedPoint::CertifiedFixedPoint(ExactInt mantissa, unsigned long scale,
                                         ExactInt err_units)
    : mantissa_(std::move(mantissa)), scale_(scale), err_units_(std::move(err_units)) {
    if (err_units_ < 0) throw std::domain_error("CertifiedFixedPoint: negative error");
    normalize();
}

CertifiedFixedPoint CertifiedFixedPoint::from_rational(const ExactInt& p, const ExactInt& q,
                                                       unsigned long scale) {
    if (q <= 0) throw std::domain_error("from_rational: denominator must be positive");
    ExactInt num = p * pow10_int(scale);
    return CertifiedFixedPoint(round_div(num, q), scale, 1);
}

CertifiedFixedPoint CertifiedFixedPoint::exact_int(const ExactInt& v) {
    return CertifiedFixedPoint(v, 0, 0);
}

void CertifiedFixedPoint::normalize() {
    while (err_units_ > 10 && scale_ > 0) {
        mantissa_ = round_div(mantissa_, 10);
        err_units_ = ceil_div(err_units_, 10) + 1; // +1 absorbs the rounding step
        --scale_;
    }
}

CertifiedFixedPoint CertifiedFixedPoint::upscaled(const CertifiedFixedPoint& x,
                                                  unsigned long scale) {
    if (scale == x.scale_) return x;
    ExactInt f = pow10_int(scale - x.scale_);
    CertifiedFixedPoint r;
    r.mantissa_ = x.mantissa_ * f;
    r.scale_ = scale;
    r.err_units_ = x.err_units_ * f;
    return r; // exact rescale; invariant re-established by the consumer
}

double CertifiedFixedPoint::value() const {
    // mantissa may hold far more than 53 bits; divide in mpf space
    mpf_class m(mantissa_, 96);
    mpf_class p(pow10_int(scale_), 96);
    return mpf_class(m / p).get_d();
}

double CertifiedFixedPoint::error_bound() const {
    mpf_class e(err_units_, 96);
    mpf_class p(pow10_int(scale_), 96);
    return mpf_class(e / p).get_d();
}

CertifiedFixedPoint CertifiedFixedPoint::operator-() const {
    CertifiedFixedPoint r = *this;
    r.mantissa_ = -r.mantissa_;
    return r;
}

CertifiedFixedPoint CertifiedFixedPoint::abs() const {
    CertifiedFixedPoint r = *this;
    r.mantissa_ = ::abs(r.mantissa_);
    return r;
}

CertifiedFixedPoint CertifiedFixedPoint::operator+(const CertifiedFixedPoint& rhs) const {
    unsigned long s = std::max(scale_, rhs.scale_);
    CertifiedFixedPoint a = upscaled(*this, s);
    CertifiedFixedPoint b = upscaled(rhs, s);
    return CertifiedFixedPoint(a.mantissa_ + b.mantissa_, s, a.err_units_ + b.err_units_);
}

CertifiedFixedPoint CertifiedFixedPoint::operator-(const CertifiedFixedPoint& rhs) const {
    return *this + (-rhs);
}

CertifiedFixedPoint CertifiedFixedPoint::mul_int(const ExactInt& k) const {
    return CertifiedFixedPoint(mantissa_ * k, scale_, err_units_ * ::abs(k));
}

CertifiedFixedPoint CertifiedFixedPoint::mul(const CertifiedFixedPoint& rhs) const {
    // |xy - mx my| <= |mx| ey + |my| ex + ex ey  (in units at scale sx+sy)
    ExactInt err = ::abs(mantissa_) * rhs.err_units_ + ::abs(rhs.mantissa_) * err_units_ +
                   err_units_ * rhs.err_units_;
    return CertifiedFixedPoint(mantissa_ * rhs.mantissa_, scale_ + rhs.scale_, err);
}

CertifiedFixedPoint CertifiedFixedPoint::rescaled(unsigned long new_scale) const {
    if (new_scale >= scale_) return upscaled(*this, new_scale);
    ExactInt f = pow10_int(scale_ - new_scale);
    return CertifiedFixedPoint(round_div(mantissa_, f), new_scale, ceil_div(err_units_, f) + 1);
}

int CertifiedFixedPoint::cmp(const CertifiedFixedPoint& rhs) const {
    unsigned long s = std::max(scale_, rhs.scale_);
    CertifiedFixedPoint a = upscaled(*this, s);
    CertifiedFixedPoint b = upscaled(rhs, s);
    if (a.mantissa_ + a.err_units_ < b.mantissa_ - b.err_units_) return -1;
    if (a.mantissa_ - a.err_units_ > b.mantissa_ + b.err_units_) return 1;
    return 0;
}

int CertifiedFixedPoint::cmp_rational(const ExactInt& p, const ExactInt& q) const {
    if (q <= 0) throw std::domain_error("cmp_rational: denominator must be positive");
    // compare mantissa/10^s +- err against p/q exactly
    ExactInt lhs_lo = (mantissa_ - err_units_) * q;
    ExactInt lhs_hi = (mantissa_ + err_units_) * q;
    ExactInt rhs = p * pow10_int(scale_);
    if (lhs_hi < rhs) return -1;
    if (lhs_lo > rhs) return 1;
    return 0;
}

std::string CertifiedFixedPoint::to_string() const {
    std::string digits = to_decimal(::abs(mantissa_));
    std::string sign = mantissa_ < 0 ? "-" : "";
    if (scale_ == 0) return sign + digits + " (+-" + to_decimal(err_units_) + ")";
    if (digits.size() <= scale_) digits.insert(0, scale_ - digits.size() + 1, '0');
    digits.insert(digits.size() - scale_, ".");
    return sign + digits + " (+-" + to_decimal(err_units_) + "e-" + std::to_string(scale_) + ")";
}

NormDistResult norm_dist(const CertifiedFixedPoint& x) {
    unsigned long s = x.scale();
    if (s == 0)
        throw std::domain_error("norm_dist: value carries no fractional digits");
    ExactInt ten_s = pow10_int(s);
    if (4 * x.err_units() >= ten_s)
        throw std::domain_error("norm_dist: error bound must be < 1/4");
    ExactInt nearest = round_div(x.mantissa(), ten_s);
    ExactInt dist_units = abs(x.mantissa() - nearest * ten_s);
    ExactInt half = ten_s / 2;
    // The true value may sit on the other side of the half-integer boundary.
    if (dist_units + x.err_units() >= half)
        throw PrecisionError("norm_dist: indistinguishable from a half-integer at scale " +
                             std::to_string(s));
    return NormDistResult{CertifiedFixedPoint(dist_units, s, x.err_units()), nearest};
}

} // namespace chirpsense

#include "chirpsense/quadratic.hpp"

#include "chirpsense/errors.hpp"

#include <stdexcept>
#include <utility>

namespace chirpsense {

namespace {

// Exact sign of A + B*sqrt(d), d > 1 non-square.
int sign_surd(const ExactInt& A, const ExactInt& B, const ExactInt& d) {
    if (A >= 0 && B >= 0) return (A == 0 && B == 0) ? 0 : 1;
    if (A <= 0 && B <= 0) return (A == 0 && B == 0) ? 0 : -1;
    // opposite signs: compare A^2 against B^2 d
    ExactInt lhs = A * A;
    ExactInt rhs = B * B * d;
    if (A > 0) return lhs > rhs ? 1 : -1; // B < 0; equality impossible (d non-square)
    return lhs < rhs ? 1 : -1;            // A < 0, B > 0
}

} // namespace

QuadraticIrrational::QuadraticIrrational(ExactInt a, ExactInt b, ExactInt c, ExactInt d)
    : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), d_(std::move(d)) {
    if (b_ == 0) throw std::domain_error("QuadraticIrrational: b must be nonzero");
    if (c_ == 0) throw std::domain_error("QuadraticIrrational: c must be nonzero");
    if (d_ <= 1) throw std::domain_error("QuadraticIrrational: d must exceed 1");
    if (is_perfect_square(d_))
        throw std::domain_error("QuadraticIrrational: d is a perfect square");
    if (c_ < 0) {
        a_ = -a_;
        b_ = -b_;
        c_ = -c_;
    }
    ExactInt g = gcd(gcd(abs(a_), abs(b_)), c_);
    if (g > 1) {
        a_ /= g;
        b_ /= g;
        c_ /= g;
    }
}

QuadraticIrrational QuadraticIrrational::golden() { return {1, 1, 2, 5}; }
QuadraticIrrational QuadraticIrrational::sqrt2() { return {0, 1, 1, 2}; }
QuadraticIrrational QuadraticIrrational::sqrt3() { return {0, 1, 1, 3}; }

CertifiedFixedPoint QuadraticIrrational::eval(unsigned long digits) const {
    if (digits < 1) throw std::domain_error("eval: digits must be >= 1");
    // Multiplying the sqrt approximation by b loses digits10(b) digits, so
    // evaluate with that much headroom plus guard, then settle at `digits`.
    unsigned long work = digits + static_cast<unsigned long>(digits10(b_)) + 4;
    ExactInt ten_w = pow10_int(work);
    ExactInt s = isqrt(d_ * ten_w * ten_w);      // floor(sqrt(d) * 10^work)
    ExactInt num = a_ * ten_w + b_ * s;          // off by < |b| units
    ExactInt mant = round_div(num, c_);          // rounding adds <= 1 unit
    CertifiedFixedPoint wide(mant, work, abs(b_) + 1);
    return wide.rescaled(digits);                // err <= 2 units at `digits`
}

int QuadraticIrrational::sign() const { return sign_surd(a_, b_, d_); }

int QuadraticIrrational::cmp_rational(const ExactInt& p, const ExactInt& q) const {
    if (q <= 0) throw std::domain_error("cmp_rational: denominator must be positive");
    // (a + b sqrt d)/c vs p/q  <=>  sign(q a - p c + q b sqrt d)
    return sign_surd(q * a_ - p * c_, q * b_, d_);
}

int QuadraticIrrational::cmp(const QuadraticIrrational& rhs) const {
    if (d_ != rhs.d_) throw std::domain_error("cmp: mismatched surd fields");
    // (a1 + b1 s)/c1 - (a2 + b2 s)/c2, c1 c2 > 0
    ExactInt A = a_ * rhs.c_ - rhs.a_ * c_;
    ExactInt B = b_ * rhs.c_ - rhs.b_ * c_;
    return sign_surd(A, B, d_);
}

ExactInt QuadraticIrrational::floor() const {
    ExactInt s = isqrt(b_ * b_ * d_); // floor(|b| sqrt d)
    // b sqrt d lies strictly between lo and lo+1:
    ExactInt lo = b_ > 0 ? s : -s - 1;
    ExactInt t = floor_div(a_ + lo, c_);
    // candidate may be off by one; fix up exactly
    while (cmp_rational(t + 1, 1) >= 0) ++t;
    while (cmp_rational(t, 1) < 0) --t;
    return t;
}

QuadraticIrrational QuadraticIrrational::operator-() const { return {-a_, -b_, c_, d_}; }

QuadraticIrrational QuadraticIrrational::add_int(const ExactInt& k) const {
    return {a_ + k * c_, b_, c_, d_};
}

QuadraticIrrational QuadraticIrrational::mul_int(const ExactInt& k) const {
    if (k == 0) throw std::domain_error("mul_int: result would be rational");
    return {a_ * k, b_ * k, c_, d_};
}

QuadraticIrrational QuadraticIrrational::add(const QuadraticIrrational& rhs) const {
    if (d_ != rhs.d_) throw std::domain_error("add: mismatched surd fields");
    ExactInt b = b_ * rhs.c_ + rhs.b_ * c_;
    if (b == 0) throw std::domain_error("add: result would be rational");
    return {a_ * rhs.c_ + rhs.a_ * c_, b, c_ * rhs.c_, d_};
}

QuadraticIrrational QuadraticIrrational::frac() const { return add_int(-floor()); }

QuadraticIrrational QuadraticIrrational::reflected_unit() const {
    return {c_ - a_, -b_, c_, d_};
}

bool QuadraticIrrational::operator==(const QuadraticIrrational& rhs) const {
    return a_ == rhs.a_ && b_ == rhs.b_ && c_ == rhs.c_ && d_ == rhs.d_;
}

std::string QuadraticIrrational::to_string() const {
    return "(" + to_decimal(a_) + " + " + to_decimal(b_) + "*sqrt(" + to_decimal(d_) +
           ")) / " + to_decimal(c_);
}

ScaledFracEvaluator::ScaledFracEvaluator(const QuadraticIrrational& q,
                                         const ExactInt& max_multiplier,
                                         unsigned long target_digits) {
    if (max_multiplier < 1)
        throw std::domain_error("ScaledFracEvaluator: max multiplier must be >= 1");
    // Working precision: digits of the largest multiplier + target + 10 guard.
    scale_ = static_cast<unsigned long>(digits10(max_multiplier)) + target_digits + 10;
    CertifiedFixedPoint v = q.eval(scale_);
    mantissa_ = v.mantissa();
    err_units_ = v.err_units();
    ten_scale_ = pow10_int(scale_);
    max_multiplier_ = max_multiplier;
}

CertifiedFixedPoint ScaledFracEvaluator::dist(const ExactInt& m) const {
    if (m < 1 || m > max_multiplier_)
        throw std::domain_error("ScaledFracEvaluator::dist: multiplier out of range");
    CertifiedFixedPoint scaled(mantissa_ * m, scale_, err_units_ * m);
    return norm_dist(scaled).dist;
}

CertifiedFixedPoint ScaledFracEvaluator::frac(const ExactInt& m) const {
    if (m < 1 || m > max_multiplier_)
        throw std::domain_error("ScaledFracEvaluator::frac: multiplier out of range");
    ExactInt prod = mantissa_ * m;
    ExactInt f;
    mpz_fdiv_r(f.get_mpz_t(), prod.get_mpz_t(), ten_scale_.get_mpz_t());
    return CertifiedFixedPoint(f, scale_, err_units_ * m);
}

double ScaledFracEvaluator::frac_double(const ExactInt& m) const {
    CertifiedFixedPoint f = frac(m);
    return f.value();
}

CertifiedFixedPoint scaled_dist(const QuadraticIrrational& q, const ExactInt& m,
                                unsigned long target_digits) {
    if (m < 1) throw std::domain_error("scaled_dist: m must be >= 1");
    ScaledFracEvaluator ev(q, m, target_digits);
    return ev.dist(m);
}

KhinchinResult khinchin_min(const QuadraticIrrational& q, const ExactInt& n,
                            unsigned long target_digits) {
    if (n < 1) throw std::domain_error("khinchin_min: n must be >= 1");
    unsigned long digits = target_digits;
    for (int attempt = 0; attempt < 12; ++attempt) {
        try {
            ScaledFracEvaluator ev(q, n, digits);
            CertifiedFixedPoint best;
            ExactInt best_j = 0;
            bool ambiguous = false;
            for (ExactInt j = 1; j <= n; ++j) {
                CertifiedFixedPoint v = ev.dist(j).mul_int(j);
                if (best_j == 0) {
                    best = v;
                    best_j = j;
                    continue;
                }
                int c = v.cmp(best);
                if (c < 0) {
                    best = v;
                    best_j = j;
                } else if (c == 0) {
                    // overlapping certificates; j * ||j q|| values are distinct
                    // for distinct j, so more digits resolve the order
                    ambiguous = true;
                    break;
                }
            }
            if (!ambiguous) return KhinchinResult{best, best_j};
        } catch (const PrecisionError&) {
            // fall through to escalation
        }
        digits *= 2;
    }
    throw PrecisionError("khinchin_min: precision escalation did not converge");
}

} // namespace chirpsense

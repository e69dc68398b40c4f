#include "chirpsense/exact_int.hpp"

#include <cctype>
#include <stdexcept>

namespace chirpsense {

ExactInt isqrt(const ExactInt& n) {
    if (n < 0) throw std::domain_error("isqrt: negative input");
    ExactInt r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    return r;
}

ExactInt pow10_int(unsigned long k) {
    ExactInt r;
    mpz_ui_pow_ui(r.get_mpz_t(), 10, k);
    return r;
}

ExactInt floor_div(const ExactInt& num, const ExactInt& den) {
    if (den <= 0) throw std::domain_error("floor_div: nonpositive denominator");
    ExactInt q;
    mpz_fdiv_q(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    return q;
}

ExactInt ceil_div(const ExactInt& num, const ExactInt& den) {
    if (den <= 0) throw std::domain_error("ceil_div: nonpositive denominator");
    ExactInt q;
    mpz_cdiv_q(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    return q;
}

ExactInt round_div(const ExactInt& num, const ExactInt& den) {
    if (den <= 0) throw std::domain_error("round_div: nonpositive denominator");
    // floor((2*num + den) / (2*den)) rounds half up; mirror for negatives so
    // ties go away from zero.
    if (num >= 0) return floor_div(2 * num + den, 2 * den);
    return -floor_div(2 * (-num) + den, 2 * den);
}

std::size_t digits10(const ExactInt& v) {
    if (v == 0) return 1;
    ExactInt a = abs(v);
    // mpz_sizeinbase may overestimate by one
    std::size_t est = mpz_sizeinbase(a.get_mpz_t(), 10);
    if (est > 1 && a < pow10_int(static_cast<unsigned long>(est - 1))) --est;
    return est;
}

std::string to_decimal(const ExactInt& v) { return v.get_str(10); }

ExactInt from_decimal(const std::string& text) {
    if (text.empty()) throw std::invalid_argument("from_decimal: empty string");
    std::size_t i = (text[0] == '+' || text[0] == '-') ? 1 : 0;
    if (i == text.size()) throw std::invalid_argument("from_decimal: no digits");
    for (; i < text.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(text[i])))
            throw std::invalid_argument("from_decimal: invalid character in '" + text + "'");
    return ExactInt(text, 10);
}

std::int64_t to_int64(const ExactInt& v) {
    if (!v.fits_slong_p()) throw std::domain_error("to_int64: out of range");
    return static_cast<std::int64_t>(v.get_si());
}

std::uint64_t to_uint64(const ExactInt& v) {
    if (v < 0 || !v.fits_ulong_p()) throw std::domain_error("to_uint64: out of range");
    return static_cast<std::uint64_t>(v.get_ui());
}

double to_double(const ExactInt& v) { return v.get_d(); }

ExactInt gcd(const ExactInt& a, const ExactInt& b) {
    ExactInt g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

bool is_perfect_square(const ExactInt& n) {
    if (n < 0) return false;
    return mpz_perfect_square_p(n.get_mpz_t()) != 0;
}

} // namespace chirpsense

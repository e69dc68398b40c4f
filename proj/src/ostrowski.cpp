#include "chirpsense/ostrowski.hpp"

#include "chirpsense/errors.hpp"

#include <stdexcept>

namespace chirpsense {

namespace {

void require_unit_interval(const QuadraticIrrational& beta) {
    if (beta.sign() <= 0 || beta.cmp_rational(1, 1) >= 0)
        throw std::domain_error("ostrowski: beta must lie in (0,1)");
}

// Index of the largest denominator <= m; prefers the larger index when
// B_0 == B_1 == 1 so that the c_1 < a_1 constraint stays satisfiable.
std::size_t largest_fitting(const std::vector<ExactInt>& B, const ExactInt& m) {
    std::size_t best = 0;
    for (std::size_t j = 0; j < B.size(); ++j)
        if (B[j] <= m) best = j;
    return best;
}

CFExpansion checked_expand(const QuadraticIrrational& beta, std::size_t k) {
    require_unit_interval(beta);
    return expand_cf(beta, k);
}

} // namespace

OstrowskiBasis::OstrowskiBasis(const QuadraticIrrational& beta, const ExactInt& max_m)
    : beta_(beta), cf_(checked_expand(beta, 8)) {
    if (max_m < 1) throw std::domain_error("OstrowskiBasis: bound must be >= 1");
    // grow the expansion until the last denominator exceeds max_m
    std::size_t k = 8;
    auto denominator_done = [&] {
        conv_ = convergents(cf_, cf_.available());
        B_.clear();
        for (const Convergent& c : conv_) B_.push_back(c.B);
        return B_.back() > max_m;
    };
    while (!denominator_done()) {
        k *= 2;
        cf_ = expand_cf(beta_, k);
    }
}

const ExactInt& OstrowskiBasis::digit_cap(std::size_t j) const {
    return cf_.quotient(j + 1); // a_{j+1}
}

const Convergent& OstrowskiBasis::convergent(std::size_t j) const {
    if (j >= conv_.size()) throw std::domain_error("OstrowskiBasis: convergent out of range");
    return conv_[j];
}

ExactInt OstrowskiRep::reconstruct(const OstrowskiBasis& basis) const {
    ExactInt sum = 0;
    for (std::size_t j = 0; j < coeffs.size(); ++j)
        sum += coeffs[j] * basis.denominators()[j];
    return sum;
}

OstrowskiRep ostrowski(const ExactInt& m, const OstrowskiBasis& basis) {
    if (m < 1) throw std::domain_error("ostrowski: m must be >= 1");
    const std::vector<ExactInt>& B = basis.denominators();
    if (B.back() <= m) throw std::domain_error("ostrowski: basis too small for m");

    OstrowskiRep rep{m, {}, basis.beta()};
    std::size_t top = largest_fitting(B, m);
    rep.coeffs.assign(top + 1, 0);
    ExactInt rem = m;
    // greedy: divide by the largest fitting denominator, recurse on remainder
    while (rem > 0) {
        std::size_t j = largest_fitting(B, rem);
        rep.coeffs[j] = floor_div(rem, B[j]);
        rem -= rep.coeffs[j] * B[j];
    }
    return rep;
}

OstrowskiRep ostrowski(const ExactInt& m, const QuadraticIrrational& beta) {
    OstrowskiBasis basis(beta, m);
    return ostrowski(m, basis);
}

std::size_t type_of(const OstrowskiRep& rep) {
    for (std::size_t j = 0; j < rep.coeffs.size(); ++j)
        if (rep.coeffs[j] != 0) return j;
    throw std::domain_error("type_of: zero representation");
}

std::size_t type_of(const ExactInt& m, const QuadraticIrrational& beta) {
    return type_of(ostrowski(m, beta));
}

std::uint64_t TypeProfile::count(std::size_t l, std::uint64_t c) const {
    auto it = histogram.find({l, c});
    return it == histogram.end() ? 0 : it->second;
}

TypeProfile type_profile(const ExactInt& n, const QuadraticIrrational& beta) {
    if (n < 1) throw std::domain_error("type_profile: n must be >= 1");
    if (n > 1000000) throw std::domain_error("type_profile: n exceeds the exhaustive limit");
    OstrowskiBasis basis(beta, n);
    TypeProfile prof{n, beta, 0, {}, basis.denominators()};
    for (ExactInt m = 1; m <= n; ++m) {
        OstrowskiRep rep = ostrowski(m, basis);
        std::size_t l = type_of(rep);
        std::uint64_t c = to_uint64(rep.coeffs[l]);
        prof.max_type = std::max(prof.max_type, l);
        ++prof.histogram[{l, c}];
    }
    return prof;
}

CertifiedFixedPoint type_lower_bound(const ExactInt& m, const QuadraticIrrational& beta_in) {
    if (m <= 1) throw std::domain_error("type_lower_bound: m must exceed 1");
    require_unit_interval(beta_in);
    // The bound's hypothesis is 0 < beta < 1/2; reflection preserves ||m beta||.
    QuadraticIrrational beta =
        beta_in.cmp_rational(1, 2) > 0 ? beta_in.reflected_unit() : beta_in;

    OstrowskiBasis basis(beta, m);
    OstrowskiRep rep = ostrowski(m, basis);
    std::size_t gamma = type_of(rep);
    const std::vector<ExactInt>& B = basis.denominators();
    std::size_t gamma_star = largest_fitting(B, m);

    auto coeff = [&](std::size_t j) -> ExactInt {
        return j < rep.coeffs.size() ? rep.coeffs[j] : ExactInt(0);
    };

    if (gamma == gamma_star) {
        // single-coefficient tail: c_{gamma+1} * ||B_gamma beta||
        CertifiedFixedPoint dist = basis.convergent(gamma).D_exact.eval(30).abs();
        if (gamma == 0) {
            // gamma(m) = gamma^* = 0: only c_1 can be nonzero
            ExactInt c1 = coeff(0);
            ExactInt a1 = basis.digit_cap(0);
            ExactInt f = c1 - 1;
            if (a1 - c1 < f) f = a1 - c1;
            if (f < 0) f = 0;
            return dist.mul_int(f);
        }
        return dist.mul_int(coeff(gamma));
    }
    if (gamma == 0) {
        CertifiedFixedPoint d0 = basis.convergent(0).D_exact.eval(30).abs();
        CertifiedFixedPoint d1 = basis.convergent(1).D_exact.eval(30).abs();
        ExactInt c1 = coeff(0), c2 = coeff(1);
        ExactInt a1 = basis.digit_cap(0), a2 = basis.digit_cap(1);
        CertifiedFixedPoint lhs = d0.mul_int(c1 - 1) + d1.mul_int(a2 - c2);
        CertifiedFixedPoint rhs = d0.mul_int(a1 - c1) + d1.mul_int(c2);
        return lhs.cmp(rhs) <= 0 ? lhs : rhs;
    }
    // 1 <= gamma <= gamma_star - 1:
    //   (c_{g+1}-1) / (2 B_{g+1}) + (a_{g+2}-c_{g+2}) / (2 B_{g+2})
    ExactInt cg1 = coeff(gamma), cg2 = coeff(gamma + 1);
    ExactInt ag2 = basis.digit_cap(gamma + 1);
    // common denominator 2 B_{g+1} B_{g+2}
    const ExactInt& B1 = B[gamma + 1];
    const ExactInt& B2 = B[gamma + 2];
    ExactInt num = (cg1 - 1) * B2 + (ag2 - cg2) * B1;
    if (num < 0) num = 0;
    return CertifiedFixedPoint::from_rational(num, 2 * B1 * B2, 30);
}

double phi_sum(const ExactInt& n, const ExactInt& J, double dist) {
    double nd = to_double(n);
    double acc = 0.0;
    for (ExactInt j = 1; j <= J; ++j) acc += 1.0 / (1.0 + nd * to_double(j) * dist);
    return acc;
}

double phi_tau(const ExactInt& tau, const QuadraticIrrational& alpha, const ExactInt& n,
               const ExactInt& lambda_num, const ExactInt& lambda_den) {
    if (n < 1) throw std::domain_error("phi_tau: n must be >= 1");
    if (lambda_den < 1 || lambda_num < lambda_den)
        throw std::domain_error("phi_tau: lambda must be a rational >= 1");
    if (tau < 1 || tau * lambda_den > n * lambda_num)
        throw std::domain_error("phi_tau: tau must satisfy 1 <= tau <= lambda*n");

    QuadraticIrrational beta = alpha.mul_int(tau).frac();
    OstrowskiBasis basis(beta, n);
    std::size_t gamma_star = largest_fitting(basis.denominators(), n);
    const ExactInt& Bg = basis.denominators()[gamma_star];

    ExactInt J = floor_div(lambda_num * n, lambda_den * Bg);
    if (J == 0) return 0.0;
    // ||B_g * tau * alpha|| == ||B_g * beta|| (integer shifts drop out)
    CertifiedFixedPoint dist = scaled_dist(beta, Bg);
    return phi_sum(n, J, dist.value());
}

std::uint64_t count_divisors(const ExactInt& m) {
    if (m < 1) throw std::domain_error("count_divisors: m must be >= 1");
    if (m > ExactInt(1000000000000L))
        throw std::domain_error("count_divisors: m exceeds the trial-division limit");
    std::uint64_t v = to_uint64(m);
    std::uint64_t count = 0;
    for (std::uint64_t i = 1; i * i <= v; ++i) {
        if (v % i == 0) count += (i * i == v) ? 1 : 2;
    }
    return count;
}

} // namespace chirpsense

#pragma once

#include "chirpsense/continued_fraction.hpp"

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

namespace chirpsense {

// Ostrowski machinery for 0 < beta < 1 (continued fraction with a_0 = 0):
// every positive integer m decomposes uniquely as m = sum_{j=0}^{p} c_{j+1} B_j
// with 0 <= c_1 < a_1, 0 <= c_{j+1} <= a_{j+1} (j >= 1) and c_j = 0 whenever
// c_{j+1} = a_{j+1}.

// Precomputed context for one beta: quotients and convergent data up to a
// denominator bound. Reused across many decompositions.
class OstrowskiBasis {
public:
    OstrowskiBasis(const QuadraticIrrational& beta, const ExactInt& max_m);

    const QuadraticIrrational& beta() const { return beta_; }
    // B_0, B_1, ... (last entry exceeds max_m)
    const std::vector<ExactInt>& denominators() const { return B_; }
    // a_1, a_2, ... aligned so quotient(j) == a_{j+1}... index j gives a_{j+1}
    const ExactInt& digit_cap(std::size_t j) const; // a_{j+1}
    const Convergent& convergent(std::size_t j) const;

private:
    QuadraticIrrational beta_;
    CFExpansion cf_;
    std::vector<Convergent> conv_;
    std::vector<ExactInt> B_;
};

struct OstrowskiRep {
    ExactInt m;
    std::vector<ExactInt> coeffs; // c_1 .. c_{p+1}
    QuadraticIrrational beta;

    ExactInt reconstruct(const OstrowskiBasis& basis) const;
};

OstrowskiRep ostrowski(const ExactInt& m, const OstrowskiBasis& basis);
OstrowskiRep ostrowski(const ExactInt& m, const QuadraticIrrational& beta);

// Type gamma(m): index of the smallest nonzero Ostrowski coefficient.
std::size_t type_of(const ExactInt& m, const QuadraticIrrational& beta);
std::size_t type_of(const OstrowskiRep& rep);

struct TypeProfile {
    ExactInt n;
    QuadraticIrrational beta;
    std::size_t max_type = 0;                                  // gamma_n^*
    std::map<std::pair<std::size_t, std::uint64_t>, std::uint64_t> histogram; // (l, c) -> #A_{l,c}
    std::vector<ExactInt> denominators;                        // B_0 ..

    std::uint64_t count(std::size_t l, std::uint64_t c) const;
};

// Exhaustive profile over m = 1..n (n <= 10^6).
TypeProfile type_profile(const ExactInt& n, const QuadraticIrrational& beta);

// Case-split lower bound on ||m beta|| from the Ostrowski coefficients and
// convergent data. Requires 0 < beta < 1 and m > 1; a beta >= 1/2 is replaced
// by 1 - beta, which leaves every ||m beta|| unchanged.
CertifiedFixedPoint type_lower_bound(const ExactInt& m, const QuadraticIrrational& beta);

// phi(tau) = sum_{j=1}^{floor(lambda*n / B)} 1 / (1 + n*j*||B*tau*alpha||)
// where B is the largest convergent denominator of beta = frac(tau*alpha)
// not exceeding n. lambda = lambda_num/lambda_den >= 1.
double phi_tau(const ExactInt& tau, const QuadraticIrrational& alpha, const ExactInt& n,
               const ExactInt& lambda_num = 1, const ExactInt& lambda_den = 1);

// The bare sum with given J and certified distance; exposed for the empty-sum
// edge and reuse in tests.
double phi_sum(const ExactInt& n, const ExactInt& J, double dist);

// Exact divisor count by trial division (1 <= m <= 10^12).
std::uint64_t count_divisors(const ExactInt& m);

} // namespace chirpsense

#pragma once

#include "chirpsense/quadratic.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace chirpsense {

// Continued fraction [a0; a1, a2, ...] of a positive quadratic irrational,
// computed by the exact integer surd recurrence. Quadratic surds are
// eventually periodic; the detected cycle over the (P, Q) surd states is
// recorded when it appears within the requested number of quotients.
struct CFExpansion {
    QuadraticIrrational beta;
    ExactInt a0;
    std::vector<ExactInt> partial_quotients; // a_1 .. a_k, all >= 1
    std::optional<std::size_t> period_start;  // index into partial_quotients (0-based)
    std::optional<std::size_t> period_length;

    // a_j for j >= 0 (a_0 == a0).
    const ExactInt& quotient(std::size_t j) const;
    std::size_t available() const { return partial_quotients.size(); }
};

CFExpansion expand_cf(const QuadraticIrrational& q, std::size_t k_max);

// One convergent A_k / B_k together with the signed error D_k = B_k*beta - A_k
// kept exactly (as an element of the same quadratic field) and as a certified
// evaluation.
struct Convergent {
    std::size_t k;
    ExactInt A;
    ExactInt B;
    QuadraticIrrational D_exact;
    CertifiedFixedPoint D_eval;
};

// Convergents 0..k (requires k < cf.available() quotients beyond a0... i.e.
// k <= cf.available()).
std::vector<Convergent> convergents(const CFExpansion& cf, std::size_t k);

// Verifies ||B_k beta|| <= ||j beta|| for all 0 < j <= B_k by exhaustive
// certified scan. Feasibility guard: B_k <= j_max.
bool best_approx_check(const QuadraticIrrational& q, std::size_t k, const ExactInt& j_max);

} // namespace chirpsense

#include "chirpsense/continued_fraction.hpp"

#include "chirpsense/errors.hpp"

#include <map>
#include <stdexcept>
#include <utility>

namespace chirpsense {

namespace {

// floor((P + sqrt(D)) / Q) for non-square D > 0 and Q != 0, exactly.
ExactInt floor_surd(const ExactInt& P, const ExactInt& D, const ExactInt& Q) {
    ExactInt s = isqrt(D); // sqrt(D) in (s, s+1)
    ExactInt t;
    if (Q > 0) {
        t = floor_div(P + s, Q);
    } else {
        // (P + sqrt(D))/Q = -(P + sqrt(D))/|Q|, numerator in (P+s, P+s+1)
        t = floor_div(-(P + s + 1), -Q);
    }
    // verify t <= x < t+1 via sign of (P + sqrt(D)) - m*Q for m in {t, t+1}
    auto cmp_with_int = [&](const ExactInt& m) {
        // sign of (P - mQ) + sqrt(D)
        ExactInt A = P - m * Q;
        int sq = Q > 0 ? 1 : -1;
        // value - m has sign = sq * sign(A + sqrt(D))
        ExactInt lhs = A * A;
        int s_inner;
        if (A >= 0)
            s_inner = 1;
        else
            s_inner = lhs < D ? 1 : -1;
        return sq * s_inner;
    };
    while (cmp_with_int(t + 1) >= 0) ++t;
    while (cmp_with_int(t) < 0) --t;
    return t;
}

} // namespace

const ExactInt& CFExpansion::quotient(std::size_t j) const {
    if (j == 0) return a0;
    if (j - 1 >= partial_quotients.size())
        throw std::domain_error("CFExpansion::quotient: index beyond expansion");
    return partial_quotients[j - 1];
}

CFExpansion expand_cf(const QuadraticIrrational& q, std::size_t k_max) {
    if (q.sign() <= 0) throw std::domain_error("expand_cf: value must be positive");

    // Bring (a + b sqrt d)/c to the classical (P + sqrt(D))/Q form with
    // Q | (D - P^2).
    ExactInt P = q.a(), Q = q.c(), D = q.b() * q.b() * q.d();
    if (q.b() < 0) {
        P = -P;
        Q = -Q;
    }
    if ((D - P * P) % Q != 0) {
        ExactInt aq = abs(Q);
        P *= aq;
        D *= aq * aq;
        Q *= aq;
    }

    CFExpansion out{q, 0, {}, std::nullopt, std::nullopt};
    ExactInt a = floor_surd(P, D, Q);
    out.a0 = a;

    std::map<std::pair<ExactInt, ExactInt>, std::size_t> seen;
    for (std::size_t k = 1; k <= k_max; ++k) {
        P = a * Q - P;
        Q = (D - P * P) / Q;
        // state (P, Q) determines a_k and the whole tail
        if (!out.period_start) {
            auto key = std::make_pair(P, Q);
            auto it = seen.find(key);
            if (it != seen.end()) {
                out.period_start = it->second;
                out.period_length = (k - 1) - it->second;
            } else {
                seen.emplace(key, k - 1);
            }
        }
        if (out.period_start && k - 1 >= *out.period_start + *out.period_length) {
            // inside the verified cycle; reuse the recorded quotient
            std::size_t idx = *out.period_start +
                              (k - 1 - *out.period_start) % *out.period_length;
            out.partial_quotients.push_back(out.partial_quotients[idx]);
            a = out.partial_quotients.back();
            continue;
        }
        a = floor_surd(P, D, Q);
        out.partial_quotients.push_back(a);
    }
    return out;
}

std::vector<Convergent> convergents(const CFExpansion& cf, std::size_t k) {
    if (k > cf.available())
        throw std::domain_error("convergents: not enough partial quotients");
    std::vector<Convergent> out;
    out.reserve(k + 1);
    ExactInt A_prev = 1, A_cur = cf.a0;   // A_{-1}, A_0
    ExactInt B_prev = 0, B_cur = 1;       // B_{-1}, B_0
    const QuadraticIrrational& beta = cf.beta;
    for (std::size_t j = 0; j <= k; ++j) {
        if (j > 0) {
            const ExactInt& aj = cf.partial_quotients[j - 1];
            ExactInt A_next = aj * A_cur + A_prev;
            ExactInt B_next = aj * B_cur + B_prev;
            A_prev = A_cur;
            A_cur = A_next;
            B_prev = B_cur;
            B_cur = B_next;
        }
        QuadraticIrrational D = beta.mul_int(B_cur).add_int(-A_cur);
        out.push_back(Convergent{j, A_cur, B_cur, D, D.eval(30)});
    }
    return out;
}

bool best_approx_check(const QuadraticIrrational& q, std::size_t k, const ExactInt& j_max) {
    CFExpansion cf = expand_cf(q, k + 1);
    std::vector<Convergent> conv = convergents(cf, k);
    const ExactInt& Bk = conv[k].B;
    if (Bk > j_max)
        throw std::domain_error("best_approx_check: B_k exceeds the exhaustive-scan limit");

    unsigned long digits = 30;
    for (int attempt = 0; attempt < 8; ++attempt) {
        try {
            ScaledFracEvaluator ev(q, Bk, digits);
            CertifiedFixedPoint dB = ev.dist(Bk);
            bool ok = true;
            bool ambiguous = false;
            for (ExactInt j = 1; j < Bk; ++j) {
                int c = ev.dist(j).cmp(dB);
                if (c < 0) {
                    ok = false;
                    break;
                }
                if (c == 0) {
                    ambiguous = true;
                    break;
                }
            }
            if (!ambiguous) return ok;
        } catch (const PrecisionError&) {
        }
        digits *= 2;
    }
    throw PrecisionError("best_approx_check: precision escalation did not converge");
}

} // namespace chirpsense

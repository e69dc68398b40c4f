#include "chirpsense/errors.hpp"
#include "chirpsense/rng.hpp"
#include "chirpsense/sensing.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>

using namespace chirpsense;

namespace {

const QuadraticIrrational kGolden = QuadraticIrrational::golden();

ComplexSequence pulse(std::size_t count) {
    ComplexSequence seq = generate(SequenceSpec::constant(count));
    for (std::size_t i = 1; i < count; ++i) seq.samples[i] = {0.0, 0.0};
    return seq;
}

// Eigenvalue oracle independent of the Jacobi path: bisection on the inertia
// (negative-pivot count) of the shifted LDL^T factorization.
std::size_t eigs_below(const CMatrix& a, double shift) {
    const std::size_t n = a.rows;
    std::vector<std::vector<double>> m(n, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            m[i][j] = a.at(i, j).real() - (i == j ? shift : 0.0);
    std::size_t negatives = 0;
    for (std::size_t k = 0; k < n; ++k) {
        double piv = m[k][k];
        if (piv == 0.0) piv = 1e-300;
        if (piv < 0.0) ++negatives;
        for (std::size_t i = k + 1; i < n; ++i) {
            double f = m[i][k] / piv;
            for (std::size_t j = k; j < n; ++j) m[i][j] -= f * m[k][j];
        }
    }
    return negatives;
}

double bisect_eig(const CMatrix& a, std::size_t index, double lo, double hi) {
    for (int iter = 0; iter < 200 && hi - lo > 1e-11; ++iter) {
        double mid = 0.5 * (lo + hi);
        if (eigs_below(a, mid) > index)
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace

TEST_CASE("toeplitz construction: pulse gives the identity (lower triangular)") {
    SensingMatrix u = build_toeplitz(pulse(8), 8, 8, ToeplitzKind::LowerTriangular);
    CHECK(u.rows() == 8);
    for (std::size_t i = 0; i < 8; ++i)
        for (std::size_t j = 0; j < 8; ++j)
            CHECK(u.entry(i, j) == std::complex<double>(i == j ? 1.0 : 0.0, 0.0));
}

TEST_CASE("toeplitz construction: fat form shift structure") {
    SensingMatrix u =
        build_toeplitz(generate(SequenceSpec::constant(3)), 3, 2, ToeplitzKind::ZeroPaddedFat);
    REQUIRE(u.rows() == 4);
    std::vector<double> col0{1, 1, 1, 0}, col1{0, 1, 1, 1};
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(u.entry(i, 0).real() == col0[i]);
        CHECK(u.entry(i, 1).real() == col1[i]);
    }
}

TEST_CASE("toeplitz entry fidelity against the index map, exhaustive n,p <= 32") {
    ComplexSequence seq = gen_hoc3(kGolden, 0, 80);
    std::size_t mismatches = 0;
    for (std::size_t n = 1; n <= 32; ++n) {
        for (std::size_t p = 1; p <= 32; ++p) {
            if (p <= n) { // lower triangular requires p <= n
                SensingMatrix lt = build_toeplitz(seq, n, p, ToeplitzKind::LowerTriangular);
                for (std::size_t i = 0; i < lt.rows(); ++i)
                    for (std::size_t j = 0; j < p; ++j) {
                        std::complex<double> want =
                            i >= j ? seq.samples[i - j] : std::complex<double>(0.0, 0.0);
                        if (lt.entry(i, j) != want) ++mismatches;
                    }
            }
            SensingMatrix fat = build_toeplitz(seq, n, p, ToeplitzKind::ZeroPaddedFat);
            if (fat.rows() != n + p - 1) ++mismatches;
            for (std::size_t i = 0; i < fat.rows(); ++i)
                for (std::size_t j = 0; j < p; ++j) {
                    std::complex<double> want = {0.0, 0.0};
                    if (i >= j && i - j < n) want = seq.samples[i - j];
                    if (fat.entry(i, j) != want) ++mismatches;
                }
            SensingMatrix ss = build_toeplitz(seq, n, p, ToeplitzKind::SteadyState);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < p; ++j)
                    if (ss.entry(i, j) != seq.samples[p + i - j]) ++mismatches;
        }
    }
    CHECK(mismatches == 0);
    CHECK_THROWS_AS(build_toeplitz(gen_hoc3(kGolden, 0, 4), 8, 8, ToeplitzKind::SteadyState),
                    std::domain_error); // too short
    CHECK_THROWS_AS(build_toeplitz(seq, 4, 8, ToeplitzKind::LowerTriangular),
                    std::domain_error); // p > n
}

TEST_CASE("column correlation basics") {
    SensingMatrix eye = build_toeplitz(pulse(8), 8, 8, ToeplitzKind::LowerTriangular);
    CMatrix sigma = column_correlation(eye, {0, 2, 5});
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            CHECK(sigma.at(i, j) == std::complex<double>(i == j ? 1.0 : 0.0, 0.0));

    CMatrix one = column_correlation(eye, {4});
    CHECK(one.at(0, 0) == std::complex<double>(1.0, 0.0));

    CHECK_THROWS_AS(column_correlation(eye, {0, 0}), std::domain_error);   // duplicate
    CHECK_THROWS_AS(column_correlation(eye, {0, 99}), std::domain_error);  // range
    CHECK_THROWS_AS(column_correlation(eye, {}), std::domain_error);

    // zero-norm column: lower-triangular matrix from a sequence whose first
    // samples vanish has an all-zero last column once shifted far enough
    ComplexSequence z = generate(SequenceSpec::constant(4));
    z.samples[0] = {0.0, 0.0};
    z.samples[1] = {0.0, 0.0};
    z.samples[2] = {0.0, 0.0};
    z.samples[3] = {0.0, 0.0};
    SensingMatrix zero = build_toeplitz(z, 4, 4, ToeplitzKind::LowerTriangular);
    CHECK_THROWS_AS(column_correlation(zero, {0}), std::domain_error);
}

TEST_CASE("steady-state off-diagonals equal windowed correlation sums") {
    const std::size_t n = 256, p = 64;
    SensingMatrix u = build_toeplitz(SequenceSpec::hoc3(kGolden, 1), n, p,
                                     ToeplitzKind::SteadyState);
    const ComplexSequence& seq = u.source();
    Rng rng(6001);
    std::vector<std::size_t> subset = rng.sample_without_replacement(p, 8);
    CMatrix sigma = column_correlation(u, subset);
    for (std::size_t a = 0; a < subset.size(); ++a) {
        for (std::size_t b = 0; b < subset.size(); ++b) {
            if (a == b) continue;
            std::size_t t = subset[a], s = subset[b];
            // <col_t, col_s> = sum over the window starting at p - t of lag t - s
            std::complex<double> acc(0.0, 0.0);
            for (std::size_t r = 0; r < n; ++r)
                acc += seq.at(static_cast<std::int64_t>(p + r - t)) *
                       std::conj(seq.at(static_cast<std::int64_t>(p + r - s)));
            double norm_t = 0.0, norm_s = 0.0;
            for (std::size_t r = 0; r < n; ++r) {
                norm_t += std::norm(seq.at(static_cast<std::int64_t>(p + r - t)));
                norm_s += std::norm(seq.at(static_cast<std::int64_t>(p + r - s)));
            }
            std::complex<double> want = acc / std::sqrt(norm_t * norm_s);
            CHECK(std::abs(sigma.at(a, b) - want) <= 1e-12);
        }
    }
}

TEST_CASE("gershgorin R variants") {
    SensingMatrix eye = build_toeplitz(pulse(8), 8, 8, ToeplitzKind::LowerTriangular);
    GershgorinR zero = gershgorin_R(eye, {0, 3, 6});
    CHECK(zero.full_sum == 0.0);
    CHECK(zero.row_max == 0.0);

    // size-2 subset: row max equals the normalized off-diagonal magnitude
    const std::size_t n = 128, p = 32;
    SensingMatrix u = build_toeplitz(SequenceSpec::hoc3(kGolden, 1, ValueMode::RealPart),
                                     n, p, ToeplitzKind::SteadyState);
    auto c0 = u.column(3);
    auto c1 = u.column(9);
    double dot = 0.0, n0 = 0.0, n1 = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
        dot += c0[r].real() * c1[r].real();
        n0 += c0[r].real() * c0[r].real();
        n1 += c1[r].real() * c1[r].real();
    }
    GershgorinR g = gershgorin_R(u, {3, 9});
    CHECK(g.row_max ==
          doctest::Approx(std::max(std::abs(dot) / n0, std::abs(dot) / n1)).epsilon(1e-12));
    CHECK(g.full_sum ==
          doctest::Approx(std::abs(dot) / n0 + std::abs(dot) / n1).epsilon(1e-12));
}

TEST_CASE("gershgorin sandwich on random subsets") {
    const std::size_t n = 256, p = 512, q = 8;
    SensingMatrix u = build_toeplitz(SequenceSpec::hoc3(kGolden, 1, ValueMode::RealPart),
                                     n, p, ToeplitzKind::SteadyState);
    Rng rng(6002);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<std::size_t> subset = rng.sample_without_replacement(p, q);
        GershgorinR g = gershgorin_R(u, subset);
        EigExtremes ext = eig_extremes(column_correlation(u, subset));
        CHECK(ext.lambda_min >= 1.0 - g.row_max - 1e-8);
        CHECK(ext.lambda_max <= 1.0 + g.row_max + 1e-8);
    }
}

TEST_CASE("jacobi eigenvalues: closed forms and the bisection oracle") {
    CMatrix eye(4, 4);
    for (std::size_t i = 0; i < 4; ++i) eye.at(i, i) = {1.0, 0.0};
    EigExtremes e = eig_extremes(eye);
    CHECK(e.lambda_min == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(e.lambda_max == doctest::Approx(1.0).epsilon(1e-12));

    CMatrix two(2, 2);
    two.at(0, 0) = two.at(1, 1) = {1.0, 0.0};
    two.at(0, 1) = two.at(1, 0) = {0.375, 0.0};
    EigExtremes e2 = eig_extremes(two);
    CHECK(e2.lambda_min == doctest::Approx(0.625).epsilon(1e-10));
    CHECK(e2.lambda_max == doctest::Approx(1.375).epsilon(1e-10));

    // random 8x8 Gram matrices against inertia bisection
    Rng rng(6003);
    for (int trial = 0; trial < 10; ++trial) {
        CMatrix b(8, 8);
        for (auto& v : b.data) v = {rng.next_gaussian(), 0.0};
        CMatrix gram(8, 8);
        for (std::size_t i = 0; i < 8; ++i)
            for (std::size_t j = 0; j < 8; ++j) {
                std::complex<double> acc(0.0, 0.0);
                for (std::size_t k = 0; k < 8; ++k)
                    acc += std::conj(b.at(k, i)) * b.at(k, j);
                gram.at(i, j) = acc;
            }
        EigExtremes ext = eig_extremes(gram);
        double radius = 0.0;
        for (std::size_t i = 0; i < 8; ++i) {
            double row = 0.0;
            for (std::size_t j = 0; j < 8; ++j) row += std::abs(gram.at(i, j));
            radius = std::max(radius, row);
        }
        double lo = -radius - 1.0, hi = radius + 1.0;
        CHECK(ext.lambda_min == doctest::Approx(bisect_eig(gram, 0, lo, hi)).epsilon(1e-8));
        CHECK(ext.lambda_max == doctest::Approx(bisect_eig(gram, 7, lo, hi)).epsilon(1e-8));
    }

    // complex Hermitian via the real embedding
    CMatrix h(2, 2);
    h.at(0, 0) = {2.0, 0.0};
    h.at(1, 1) = {1.0, 0.0};
    h.at(0, 1) = {0.0, 0.5};
    h.at(1, 0) = {0.0, -0.5};
    EigExtremes eh = eig_extremes(h);
    // eigenvalues 1.5 +- sqrt(0.5)
    CHECK(eh.lambda_min == doctest::Approx(1.5 - std::sqrt(0.5)).epsilon(1e-10));
    CHECK(eh.lambda_max == doctest::Approx(1.5 + std::sqrt(0.5)).epsilon(1e-10));

    CMatrix bad(2, 2);
    bad.at(0, 1) = {0.1, 0.0};
    bad.at(1, 0) = {0.4, 0.0};
    CHECK_THROWS_AS(eig_extremes(bad), std::domain_error);
}

TEST_CASE("rip monotonicity for nested subsets") {
    const std::size_t n = 256, p = 512;
    SensingMatrix u = build_toeplitz(SequenceSpec::hoc3(kGolden, 1, ValueMode::RealPart),
                                     n, p, ToeplitzKind::SteadyState);
    Rng rng(6004);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<std::size_t> outer = rng.sample_without_replacement(p, 8);
        std::vector<std::size_t> inner(outer.begin(), outer.begin() + 5);
        // eigenvalues of the unnormalized Gram obey the interlacing containment
        auto gram_eig = [&u](const std::vector<std::size_t>& subset) {
            const std::size_t q = subset.size();
            CMatrix g(q, q);
            for (std::size_t a = 0; a < q; ++a) {
                auto ca = u.column(subset[a]);
                for (std::size_t b = 0; b < q; ++b) {
                    auto cb = u.column(subset[b]);
                    std::complex<double> acc(0.0, 0.0);
                    for (std::size_t r = 0; r < ca.size(); ++r)
                        acc += std::conj(ca[r]) * cb[r];
                    g.at(a, b) = acc;
                }
            }
            return eig_extremes(g);
        };
        EigExtremes big = gram_eig(outer);
        EigExtremes small = gram_eig(inner);
        CHECK(big.lambda_min <= small.lambda_min + 1e-8);
        CHECK(small.lambda_max <= big.lambda_max + 1e-8);
    }
}

TEST_CASE("rip order bound") {
    // pulse: all off-correlations vanish, every order certifies
    SensingMatrix eye = build_toeplitz(pulse(16), 16, 16, ToeplitzKind::LowerTriangular);
    CHECK(rip_order_bound(eye) == 16);

    // constant ones: the first off-diagonal ratio is ~1
    SensingMatrix ones =
        build_toeplitz(generate(SequenceSpec::constant(64)), 64, 32, ToeplitzKind::ZeroPaddedFat);
    CHECK(rip_order_bound(ones) == 1);

    // growth with n for the HOC fat construction
    SensingMatrix small = build_toeplitz(SequenceSpec::hoc3(kGolden, 1), 256, 256,
                                         ToeplitzKind::ZeroPaddedFat);
    SensingMatrix large = build_toeplitz(SequenceSpec::hoc3(kGolden, 1), 4096, 4096,
                                         ToeplitzKind::ZeroPaddedFat);
    std::size_t q_small = rip_order_bound(small);
    std::size_t q_large = rip_order_bound(large);
    CHECK(q_small >= 2);
    // q >= c n^{1/4} with c calibrated at n = 256: q(4096) >= 2 q(256)
    CHECK(q_large >= 2 * q_small);

    // invertibility of certified-order subsets
    Rng rng(6005);
    for (int trial = 0; trial < 500; ++trial) {
        std::vector<std::size_t> subset = rng.sample_without_replacement(small.cols(), q_small);
        EigExtremes ext = eig_extremes(column_correlation(small, subset));
        CHECK(ext.lambda_min > 0.0);
    }
}

TEST_CASE("rip report") {
    SensingMatrix u = build_toeplitz(SequenceSpec::hoc3(kGolden, 1, ValueMode::RealPart),
                                     256, 256, ToeplitzKind::SteadyState);
    RipReport rep = rip_report(u, 16, 99);
    CHECK(rep.q >= 1);
    CHECK(rep.certified == (rep.r_bound < 1.0));
    CHECK(rep.sampled.size() == 16);
    for (const SampledSubset& s : rep.sampled) {
        CHECK(s.subset.size() == rep.q);
        CHECK(s.lambda_min >= 1.0 - s.r_row_max - 1e-8);
        CHECK(s.lambda_max <= 1.0 + s.r_row_max + 1e-8);
    }
    CHECK(rep.delta_q_estimate < 1.0);
    RipReport none = rip_report(u, 0, 99);
    CHECK(none.sampled.empty());
}

TEST_CASE("simulate_output") {
    SensingMatrix eye = build_toeplitz(pulse(6), 6, 6, ToeplitzKind::LowerTriangular);
    FirSystem sys;
    sys.p = 6;
    sys.g = {0.0, 2.0, 0.0, -1.5, 0.0, 0.25};
    sys.support = {1, 3, 5};
    sys.noise_sigma = 0.0;
    auto y = simulate_output(eye, sys, 42);
    for (std::size_t i = 0; i < 6; ++i) CHECK(y[i].real() == sys.g[i]); // pulse recovers g

    sys.g.assign(6, 0.0);
    sys.support.clear();
    sys.noise_sigma = 0.7;
    auto w1 = simulate_output(eye, sys, 42);
    auto w2 = simulate_output(eye, sys, 42);
    auto w3 = simulate_output(eye, sys, 43);
    bool diff = false;
    for (std::size_t i = 0; i < 6; ++i) {
        CHECK(w1[i] == w2[i]); // bit-identical under the same seed
        CHECK(w1[i].imag() == 0.0);
        diff = diff || (w1[i] != w3[i]);
    }
    CHECK(diff);
}

TEST_CASE("omp recovery") {
    const std::size_t n = 64, p = 128, k = 4;
    SensingMatrix u = build_toeplitz(SequenceSpec::hoc3(kGolden, 1, ValueMode::RealPart),
                                     n, p, ToeplitzKind::SteadyState);
    Rng rng(6006);
    for (int trial = 0; trial < 20; ++trial) {
        FirSystem sys;
        sys.p = p;
        sys.g.assign(p, 0.0);
        sys.support = rng.sample_without_replacement(p, k);
        for (std::size_t idx : sys.support)
            sys.g[idx] = (rng.next_u64() & 1 ? 1.0 : -1.0) * (0.5 + rng.next_double());
        auto y = simulate_output(u, sys, 0);
        OmpResult rec = omp_recover(u, y, k);
        CHECK(rec.estimate.support == sys.support);
        CHECK(rec.residual_norm <= 1e-10);
        for (std::size_t i = 0; i < p; ++i)
            CHECK(std::abs(rec.estimate.g[i] - sys.g[i]) <= 1e-8);
    }

    // k = 0 and y = 0 yield the zero estimate
    std::vector<std::complex<double>> y0(u.rows(), {0.0, 0.0});
    OmpResult z = omp_recover(u, y0, 3);
    CHECK(z.estimate.support.empty());
    for (double v : z.estimate.g) CHECK(v == 0.0);
    auto y1 = simulate_output(u,
                              [&] {
                                  FirSystem s;
                                  s.p = p;
                                  s.g.assign(p, 0.0);
                                  s.g[3] = 1.0;
                                  s.support = {3};
                                  return s;
                              }(),
                              0);
    OmpResult zk = omp_recover(u, y1, 0);
    CHECK(zk.estimate.support.empty());

    CHECK_THROWS_AS(omp_recover(u, y1, p + 1), std::domain_error);

    // identical columns make the active-set system rank deficient; the
    // observation keeps the residual nonzero so a second column is selected
    SensingMatrix ones = build_toeplitz(generate(SequenceSpec::constant(40)), 20, 8,
                                        ToeplitzKind::SteadyState);
    std::vector<std::complex<double>> yc(20, {0.0, 0.0});
    yc[0] = {1.0, 0.0};
    CHECK_THROWS_AS(omp_recover(ones, yc, 2), IllConditionedError);
}

TEST_CASE("cond experiment") {
    SequenceSpec spec = SequenceSpec::hoc3(kGolden, 1, ValueMode::RealPart);

    // q = 1 gives condition number exactly 1
    CondExperiment single;
    single.n_values = {40};
    single.p_rule = "2n";
    single.q_rule = "1";
    single.trials = 10;
    single.rng_seed = 7;
    CondResults r1 = cond_mc(single, spec);
    for (const CondRow& row : r1.rows) CHECK(row.cond_sv == 1.0);

    // orthogonal design (pulse lower-triangular path via steady state of a
    // pulse train is not expressible here; use q=1 plus the identity check in
    // column_correlation tests). Determinism and worker independence:
    CondExperiment exp;
    exp.n_values = {30, 60};
    exp.p_rule = "2n";
    exp.q_rule = "n/5";
    exp.trials = 12;
    exp.rng_seed = 123;
    exp.workers = 1;
    CondResults a = cond_mc(exp, spec);
    exp.workers = 4;
    CondResults b = cond_mc(exp, spec);
    REQUIRE(a.rows.size() == b.rows.size());
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        CHECK(a.rows[i].n == b.rows[i].n);
        CHECK(a.rows[i].trial == b.rows[i].trial);
        CHECK(a.rows[i].cond_sv == b.rows[i].cond_sv); // bit identical
    }
    for (const CondRow& row : a.rows) {
        CHECK(row.cond_sv >= 1.0);
        CHECK(std::isfinite(row.cond_sv));
        CHECK(row.cond_eig == doctest::Approx(row.cond_sv * row.cond_sv).epsilon(1e-12));
    }
    for (const CondSummary& s : a.summary) {
        CHECK(s.trials == 12);
        CHECK(s.min <= s.median);
        CHECK(s.median <= s.max);
    }

    CHECK_THROWS_AS([&] {
        CondExperiment bad = exp;
        bad.trials = 0;
        cond_mc(bad, spec);
    }(), std::domain_error);
    CHECK_THROWS_AS([&] {
        CondExperiment bad = exp;
        bad.q_rule = "5n";
        cond_mc(bad, spec);
    }(), std::domain_error);
}

TEST_CASE("rule parser") {
    CHECK(eval_rule("2n", 50) == 100);
    CHECK(eval_rule("n", 50) == 50);
    CHECK(eval_rule("n/5", 50) == 10);
    CHECK(eval_rule("n/7", 4) == 1); // floors to at least 1
    CHECK(eval_rule("123", 50) == 123);
    CHECK_THROWS_AS(eval_rule("n/0", 50), std::domain_error);
}

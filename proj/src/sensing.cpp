#include "chirpsense/sensing.hpp"

#include "chirpsense/errors.hpp"
#include "chirpsense/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>
#include <thread>

namespace chirpsense {

std::string to_string(ToeplitzKind kind) {
    switch (kind) {
        case ToeplitzKind::LowerTriangular: return "lower_triangular";
        case ToeplitzKind::ZeroPaddedFat: return "zero_padded_fat";
        case ToeplitzKind::SteadyState: return "steady_state";
    }
    return "?";
}

ToeplitzKind toeplitz_kind_from_string(const std::string& s) {
    if (s == "lower_triangular" || s == "lower") return ToeplitzKind::LowerTriangular;
    if (s == "zero_padded_fat" || s == "fat") return ToeplitzKind::ZeroPaddedFat;
    if (s == "steady_state" || s == "steady") return ToeplitzKind::SteadyState;
    throw std::domain_error("unknown Toeplitz kind '" + s + "'");
}

namespace {

void require_range(const ComplexSequence& seq, std::int64_t lo, std::int64_t hi,
                   ToeplitzKind kind) {
    if (!seq.covers(lo, hi))
        throw std::domain_error("build_toeplitz: " + to_string(kind) +
                                " needs sequence indices [" + std::to_string(lo) + ", " +
                                std::to_string(hi) + "]");
}

} // namespace

SensingMatrix::SensingMatrix(ComplexSequence seq, std::size_t n, std::size_t p,
                             ToeplitzKind kind)
    : seq_(std::move(seq)), n_(n), p_(p), kind_(kind) {
    if (n_ == 0 || p_ == 0) throw std::domain_error("SensingMatrix: empty dimensions");
    switch (kind_) {
        case ToeplitzKind::LowerTriangular:
            if (p_ > n_)
                throw std::domain_error("SensingMatrix: lower-triangular form needs p <= n");
            require_range(seq_, 0, static_cast<std::int64_t>(n_) - 1, kind_);
            break;
        case ToeplitzKind::ZeroPaddedFat:
            require_range(seq_, 0, static_cast<std::int64_t>(n_) - 1, kind_);
            break;
        case ToeplitzKind::SteadyState:
            require_range(seq_, 1, static_cast<std::int64_t>(p_ + n_) - 1, kind_);
            break;
    }
}

std::size_t SensingMatrix::rows() const {
    return kind_ == ToeplitzKind::ZeroPaddedFat ? n_ + p_ - 1 : n_;
}

std::complex<double> SensingMatrix::entry(std::size_t i, std::size_t j) const {
    if (i >= rows() || j >= cols()) throw std::domain_error("SensingMatrix::entry: out of range");
    const std::int64_t ii = static_cast<std::int64_t>(i);
    const std::int64_t jj = static_cast<std::int64_t>(j);
    switch (kind_) {
        case ToeplitzKind::LowerTriangular:
            return ii >= jj ? seq_.at(ii - jj) : std::complex<double>(0.0, 0.0);
        case ToeplitzKind::ZeroPaddedFat: {
            std::int64_t k = ii - jj;
            return (k >= 0 && k < static_cast<std::int64_t>(n_)) ? seq_.at(k)
                                                                 : std::complex<double>(0.0, 0.0);
        }
        case ToeplitzKind::SteadyState:
            return seq_.at(static_cast<std::int64_t>(p_) + ii - jj);
    }
    return {0.0, 0.0};
}

std::vector<std::complex<double>> SensingMatrix::column(std::size_t j) const {
    std::vector<std::complex<double>> col(rows());
    for (std::size_t i = 0; i < rows(); ++i) col[i] = entry(i, j);
    return col;
}

CMatrix SensingMatrix::dense() const {
    CMatrix m(rows(), cols());
    for (std::size_t i = 0; i < rows(); ++i)
        for (std::size_t j = 0; j < cols(); ++j) m.at(i, j) = entry(i, j);
    return m;
}

SensingMatrix build_toeplitz(const ComplexSequence& seq, std::size_t n, std::size_t p,
                             ToeplitzKind kind) {
    return SensingMatrix(seq, n, p, kind);
}

SensingMatrix build_toeplitz(const SequenceSpec& spec, std::size_t n, std::size_t p,
                             ToeplitzKind kind) {
    std::int64_t hi = kind == ToeplitzKind::SteadyState
                          ? static_cast<std::int64_t>(p + n) - 1
                          : static_cast<std::int64_t>(n) - 1;
    return SensingMatrix(generate(spec, 0, hi), n, p, kind);
}

namespace {

void validate_subset(const SensingMatrix& u, const std::vector<std::size_t>& subset) {
    if (subset.empty()) throw std::domain_error("column subset must be nonempty");
    std::set<std::size_t> seen;
    for (std::size_t j : subset) {
        if (j >= u.cols()) throw std::domain_error("column subset index out of range");
        if (!seen.insert(j).second) throw std::domain_error("column subset has duplicates");
    }
}

// Gram data of the subset columns: inner products and squared norms.
struct SubsetGram {
    CMatrix inner;               // inner(i,j) = <col_i, col_j>
    std::vector<double> norm2;
};

SubsetGram subset_gram(const SensingMatrix& u, const std::vector<std::size_t>& subset) {
    validate_subset(u, subset);
    const std::size_t q = subset.size();
    SubsetGram g{CMatrix(q, q), std::vector<double>(q)};
    std::vector<std::vector<std::complex<double>>> cols(q);
    for (std::size_t i = 0; i < q; ++i) cols[i] = u.column(subset[i]);
    for (std::size_t i = 0; i < q; ++i) {
        for (std::size_t j = i; j < q; ++j) {
            std::complex<double> acc(0.0, 0.0);
            for (std::size_t r = 0; r < cols[i].size(); ++r)
                acc += cols[i][r] * std::conj(cols[j][r]);
            g.inner.at(i, j) = acc;
            g.inner.at(j, i) = std::conj(acc);
        }
        g.norm2[i] = g.inner.at(i, i).real();
        if (g.norm2[i] <= 0.0)
            throw std::domain_error("column_correlation: zero-norm column " +
                                    std::to_string(subset[i]));
    }
    return g;
}

} // namespace

CMatrix column_correlation(const SensingMatrix& u, const std::vector<std::size_t>& subset) {
    SubsetGram g = subset_gram(u, subset);
    const std::size_t q = subset.size();
    CMatrix sigma(q, q);
    for (std::size_t i = 0; i < q; ++i) {
        for (std::size_t j = 0; j < q; ++j) {
            if (i == j) {
                sigma.at(i, j) = {1.0, 0.0};
            } else {
                sigma.at(i, j) = g.inner.at(i, j) / std::sqrt(g.norm2[i] * g.norm2[j]);
            }
        }
    }
    return sigma;
}

GershgorinR gershgorin_R(const SensingMatrix& u, const std::vector<std::size_t>& subset) {
    SubsetGram g = subset_gram(u, subset);
    const std::size_t q = subset.size();
    GershgorinR out{0.0, 0.0};
    for (std::size_t i = 0; i < q; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < q; ++j) {
            if (i == j) continue;
            row += std::abs(g.inner.at(i, j)) / g.norm2[i];
        }
        out.full_sum += row;
        out.row_max = std::max(out.row_max, row);
    }
    return out;
}

namespace {

// Worst normalized magnitude per column distance, conservatively over all
// admissible placements of the lag.
std::vector<double> lag_magnitudes(const SensingMatrix& u) {
    const std::size_t p = u.cols();
    std::vector<double> mags;
    mags.reserve(2 * (p - 1));
    if (u.kind() == ToeplitzKind::ZeroPaddedFat && u.n() >= 2) {
        // shift structure: the normalized correlation of columns at distance
        // delta equals |r~(delta)| / r~(0) regardless of placement
        const ComplexSequence& seq = u.source();
        const std::size_t n = u.n() - 1; // window over samples 0..n-1
        auto prof = (u.n() >= 512) ? aperiodic_profile_fft(seq, n)
                                   : aperiodic_profile_direct(seq, n);
        double r0 = prof[0].real();
        for (std::size_t delta = 1; delta < p; ++delta) {
            double v = delta <= n ? std::abs(prof[delta]) / r0 : 0.0;
            mags.push_back(v); // the +delta and -delta placements
            mags.push_back(v);
        }
        return mags;
    }
    // generic kinds: scan ordered column pairs, normalize by the row column
    std::vector<std::vector<std::complex<double>>> cols(p);
    std::vector<double> norm2(p);
    for (std::size_t j = 0; j < p; ++j) {
        cols[j] = u.column(j);
        double n2 = 0.0;
        for (const auto& v : cols[j]) n2 += std::norm(v);
        norm2[j] = n2;
        if (n2 <= 0.0) throw std::domain_error("rip_order_bound: zero-norm column");
    }
    for (std::size_t delta = 1; delta < p; ++delta) {
        double fwd = 0.0, rev = 0.0;
        for (std::size_t c = 0; c + delta < p; ++c) {
            std::complex<double> acc(0.0, 0.0);
            for (std::size_t r = 0; r < cols[c].size(); ++r)
                acc += cols[c][r] * std::conj(cols[c + delta][r]);
            fwd = std::max(fwd, std::abs(acc) / norm2[c]);
            rev = std::max(rev, std::abs(acc) / norm2[c + delta]);
        }
        mags.push_back(fwd);
        mags.push_back(rev);
    }
    return mags;
}

} // namespace

std::size_t rip_order_bound(const SensingMatrix& u) {
    std::vector<double> mags = lag_magnitudes(u);
    std::sort(mags.begin(), mags.end(), std::greater<double>());
    double acc = 0.0;
    std::size_t q = 0;
    while (q < u.cols()) {
        double next = q < mags.size() ? mags[q] : 0.0;
        if (acc + next >= 1.0) break;
        acc += next;
        ++q;
    }
    return std::max<std::size_t>(q, 1); // a single column is always an isometry
}

RipReport rip_report(const SensingMatrix& u, std::size_t sampled_subsets,
                     std::uint64_t rng_seed) {
    RipReport rep;
    std::vector<double> mags = lag_magnitudes(u);
    std::sort(mags.begin(), mags.end(), std::greater<double>());
    rep.q = rip_order_bound(u);
    rep.r_bound = 0.0;
    for (std::size_t i = 0; i < rep.q && i < mags.size(); ++i) rep.r_bound += mags[i];
    rep.certified = rep.r_bound < 1.0;

    Rng rng(derive_seed(rng_seed, 0x52495053ULL, u.cols()));
    for (std::size_t s = 0; s < sampled_subsets; ++s) {
        std::vector<std::size_t> subset =
            rng.sample_without_replacement(u.cols(), std::min(rep.q, u.cols()));
        CMatrix sigma = column_correlation(u, subset);
        EigExtremes ext = eig_extremes(sigma);
        GershgorinR r = gershgorin_R(u, subset);
        rep.sampled.push_back(SampledSubset{subset, ext.lambda_min, ext.lambda_max, r.row_max});
        rep.delta_q_estimate = std::max(
            rep.delta_q_estimate,
            std::max(std::abs(ext.lambda_max - 1.0), std::abs(1.0 - ext.lambda_min)));
    }
    return rep;
}

std::vector<std::complex<double>> simulate_output(const SensingMatrix& u, const FirSystem& sys,
                                                  std::uint64_t rng_seed) {
    if (sys.p != u.cols()) throw std::domain_error("simulate_output: dimension mismatch");
    if (sys.g.size() != sys.p) throw std::domain_error("simulate_output: bad coefficient vector");
    std::vector<std::complex<double>> y(u.rows(), {0.0, 0.0});
    for (std::size_t j = 0; j < u.cols(); ++j) {
        if (sys.g[j] == 0.0) continue;
        for (std::size_t i = 0; i < u.rows(); ++i) y[i] += u.entry(i, j) * sys.g[j];
    }
    if (sys.noise_sigma > 0.0) {
        Rng rng(rng_seed);
        for (auto& v : y) v += std::complex<double>(sys.noise_sigma * rng.next_gaussian(), 0.0);
    }
    return y;
}

OmpResult omp_recover(const SensingMatrix& u, const std::vector<std::complex<double>>& y,
                      std::size_t k) {
    if (y.size() != u.rows()) throw std::domain_error("omp_recover: observation length mismatch");
    if (k > std::min(u.rows(), u.cols()))
        throw std::domain_error("omp_recover: k exceeds min(rows, cols)");

    OmpResult res;
    res.estimate.p = u.cols();
    res.estimate.g.assign(u.cols(), 0.0);

    double ynorm = 0.0;
    for (const auto& v : y) ynorm += std::norm(v);
    ynorm = std::sqrt(ynorm);

    std::vector<std::vector<std::complex<double>>> cols(u.cols());
    std::vector<double> colnorm(u.cols());
    for (std::size_t j = 0; j < u.cols(); ++j) {
        cols[j] = u.column(j);
        double n2 = 0.0;
        for (const auto& v : cols[j]) n2 += std::norm(v);
        colnorm[j] = std::sqrt(n2);
    }

    std::vector<std::size_t> active;
    std::vector<std::complex<double>> coef;
    std::vector<std::complex<double>> residual = y;

    auto res_norm = [&residual] {
        double s = 0.0;
        for (const auto& v : residual) s += std::norm(v);
        return std::sqrt(s);
    };

    for (std::size_t it = 0; it < k; ++it) {
        if (res_norm() <= 1e-12 * std::max(1.0, ynorm)) break;
        // max correlation against the residual
        double best = -1.0;
        std::size_t best_j = u.cols();
        for (std::size_t j = 0; j < u.cols(); ++j) {
            if (colnorm[j] == 0.0) continue;
            if (std::find(active.begin(), active.end(), j) != active.end()) continue;
            std::complex<double> acc(0.0, 0.0);
            for (std::size_t r = 0; r < residual.size(); ++r)
                acc += std::conj(cols[j][r]) * residual[r];
            double score = std::abs(acc) / colnorm[j];
            if (score > best) {
                best = score;
                best_j = j;
            }
        }
        if (best_j == u.cols()) break;
        active.push_back(best_j);

        // least squares on the active set via normal equations
        const std::size_t m = active.size();
        CMatrix gram(m, m);
        std::vector<std::complex<double>> rhs(m);
        for (std::size_t a = 0; a < m; ++a) {
            for (std::size_t b = a; b < m; ++b) {
                std::complex<double> acc(0.0, 0.0);
                for (std::size_t r = 0; r < u.rows(); ++r)
                    acc += std::conj(cols[active[a]][r]) * cols[active[b]][r];
                gram.at(a, b) = acc;
                gram.at(b, a) = std::conj(acc);
            }
            std::complex<double> acc(0.0, 0.0);
            for (std::size_t r = 0; r < u.rows(); ++r)
                acc += std::conj(cols[active[a]][r]) * y[r];
            rhs[a] = acc;
        }
        coef = solve_hermitian(gram, rhs);

        residual = y;
        for (std::size_t a = 0; a < m; ++a)
            for (std::size_t r = 0; r < u.rows(); ++r)
                residual[r] -= coef[a] * cols[active[a]][r];
        res.iterations = it + 1;
    }

    for (std::size_t a = 0; a < active.size(); ++a)
        res.estimate.g[active[a]] = coef.empty() ? 0.0 : coef[a].real();
    res.estimate.support = active;
    std::sort(res.estimate.support.begin(), res.estimate.support.end());
    res.residual_norm = res_norm();
    return res;
}

std::size_t eval_rule(const std::string& rule, std::size_t n) {
    if (rule.empty()) throw std::domain_error("eval_rule: empty rule");
    if (rule == "n") return n;
    if (rule.back() == 'n') {
        std::size_t k = std::stoull(rule.substr(0, rule.size() - 1));
        return k * n;
    }
    if (rule.rfind("n/", 0) == 0) {
        std::size_t k = std::stoull(rule.substr(2));
        if (k == 0) throw std::domain_error("eval_rule: division by zero");
        return std::max<std::size_t>(1, n / k);
    }
    return std::stoull(rule); // constant
}

CondResults cond_mc(const CondExperiment& exp, const SequenceSpec& seq_spec) {
    if (exp.trials == 0) throw std::domain_error("cond_mc: trials must be >= 1");
    if (exp.n_values.empty()) throw std::domain_error("cond_mc: no n values");

    struct Cell {
        std::size_t n_index;
        std::size_t trial;
    };
    std::vector<Cell> cells;
    for (std::size_t ni = 0; ni < exp.n_values.size(); ++ni)
        for (std::size_t t = 0; t < exp.trials; ++t) cells.push_back({ni, t});

    // one matrix per n, shared read-only across workers
    std::vector<SensingMatrix> mats;
    std::vector<std::size_t> qs;
    for (std::size_t n : exp.n_values) {
        std::size_t p = eval_rule(exp.p_rule, n);
        std::size_t q = eval_rule(exp.q_rule, n);
        if (q > p) throw std::domain_error("cond_mc: q_rule exceeds p_rule");
        mats.push_back(build_toeplitz(seq_spec, n, p, ToeplitzKind::SteadyState));
        qs.push_back(q);
    }

    std::vector<CondRow> rows(cells.size());
    auto run_cell = [&](std::size_t ci) {
        const Cell& cell = cells[ci];
        const SensingMatrix& mat = mats[cell.n_index];
        std::size_t n = exp.n_values[cell.n_index];
        Rng rng(derive_seed(exp.rng_seed, n, cell.trial));
        std::vector<std::size_t> subset =
            rng.sample_without_replacement(mat.cols(), qs[cell.n_index]);
        EigExtremes ext = eig_extremes(column_correlation(mat, subset));
        double cond_eig = ext.lambda_min > 0.0
                              ? ext.lambda_max / ext.lambda_min
                              : std::numeric_limits<double>::infinity();
        rows[ci] = CondRow{n, cell.trial, std::sqrt(cond_eig), cond_eig};
    };

    std::size_t workers = std::max<std::size_t>(1, exp.workers);
    if (workers == 1) {
        for (std::size_t ci = 0; ci < cells.size(); ++ci) run_cell(ci);
    } else {
        std::vector<std::thread> pool;
        std::size_t chunk = (cells.size() + workers - 1) / workers;
        for (std::size_t w = 0; w < workers; ++w) {
            std::size_t lo = w * chunk, hi = std::min(cells.size(), lo + chunk);
            if (lo >= hi) break;
            pool.emplace_back([&, lo, hi] {
                for (std::size_t ci = lo; ci < hi; ++ci) run_cell(ci);
            });
        }
        for (auto& th : pool) th.join();
    }

    CondResults out;
    out.rows = std::move(rows);
    for (std::size_t ni = 0; ni < exp.n_values.size(); ++ni) {
        std::vector<double> vals;
        for (const CondRow& r : out.rows)
            if (r.n == exp.n_values[ni]) vals.push_back(r.cond_sv);
        std::sort(vals.begin(), vals.end());
        CondSummary s;
        s.n = exp.n_values[ni];
        s.trials = vals.size();
        s.min = vals.front();
        s.max = vals.back();
        s.median = vals.size() % 2 == 1
                       ? vals[vals.size() / 2]
                       : 0.5 * (vals[vals.size() / 2 - 1] + vals[vals.size() / 2]);
        double sum = 0.0;
        for (double v : vals) sum += v;
        s.mean = sum / static_cast<double>(vals.size());
        out.summary.push_back(s);
    }
    return out;
}

} // namespace chirpsense

#include "chirpsense/acf.hpp"

#include "chirpsense/fft.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace chirpsense {

namespace {

void require_cover(const ComplexSequence& seq, std::int64_t lo, std::int64_t hi,
                   const char* who) {
    if (!seq.covers(lo, hi))
        throw std::domain_error(std::string(who) + ": sequence does not cover indices [" +
                                std::to_string(lo) + ", " + std::to_string(hi) + "]");
}

bool is_real_sequence(const ComplexSequence& seq) {
    for (const auto& s : seq.samples)
        if (s.imag() != 0.0) return false;
    return true;
}

} // namespace

std::complex<double> aperiodic_acf(const ComplexSequence& seq, std::size_t n,
                                   std::size_t tau) {
    if (tau > n) throw std::domain_error("aperiodic_acf: tau must satisfy 0 <= tau <= n");
    require_cover(seq, 0, static_cast<std::int64_t>(n), "aperiodic_acf");
    std::complex<double> acc(0.0, 0.0);
    for (std::size_t s = 0; s + tau <= n; ++s)
        acc += seq.at(static_cast<std::int64_t>(s)) *
               std::conj(seq.at(static_cast<std::int64_t>(s + tau)));
    return acc / static_cast<double>(n);
}

std::complex<double> windowed_acf(const ComplexSequence& seq, std::int64_t t,
                                  std::size_t n, std::int64_t tau) {
    std::int64_t nn = static_cast<std::int64_t>(n);
    require_cover(seq, std::min(t, t + tau), std::max(t + nn, t + nn + tau), "windowed_acf");
    std::complex<double> acc(0.0, 0.0);
    for (std::int64_t s = t; s <= t + nn; ++s) acc += seq.at(s) * std::conj(seq.at(s + tau));
    return acc / static_cast<double>(n);
}

std::vector<std::complex<double>> aperiodic_profile_direct(const ComplexSequence& seq,
                                                           std::size_t n) {
    require_cover(seq, 0, static_cast<std::int64_t>(n), "aperiodic_profile");
    std::vector<std::complex<double>> out(n + 1);
    for (std::size_t tau = 0; tau <= n; ++tau) out[tau] = aperiodic_acf(seq, n, tau);
    return out;
}

std::vector<std::complex<double>> aperiodic_profile_fft(const ComplexSequence& seq,
                                                        std::size_t n) {
    require_cover(seq, 0, static_cast<std::int64_t>(n), "aperiodic_profile");
    std::size_t off = static_cast<std::size_t>(-seq.start_index);
    std::vector<std::complex<double>> x(seq.samples.begin() + off,
                                        seq.samples.begin() + off + n + 1);
    std::vector<std::complex<double>> c = autocorrelation_fft(x);
    for (auto& v : c) v /= static_cast<double>(n);
    return c;
}

namespace {

CurvePoint worst_from_profile(const std::vector<std::complex<double>>& r, std::size_t n) {
    double r0 = r[0].real();
    double best = -1.0;
    std::size_t best_tau = 1;
    for (std::size_t tau = 1; tau <= n; ++tau) {
        double v = std::abs(r[tau]) / r0;
        if (v > best) {
            best = v;
            best_tau = tau;
        }
    }
    return CurvePoint{n, best, best_tau};
}

} // namespace

std::vector<CurvePoint> worst_case_curve(const SequenceSpec& spec,
                                         const std::vector<std::size_t>& lengths,
                                         std::size_t workers) {
    if (lengths.empty()) throw std::domain_error("worst_case_curve: no lengths given");
    for (std::size_t i = 1; i < lengths.size(); ++i)
        if (lengths[i] <= lengths[i - 1])
            throw std::domain_error("worst_case_curve: lengths must be ascending");
    std::size_t n_max = lengths.back();
    ComplexSequence seq = generate(spec, 0, static_cast<std::int64_t>(n_max));
    std::vector<CurvePoint> out(lengths.size());
    auto run_one = [&](std::size_t i) {
        std::size_t n = lengths[i];
        auto r = (n >= 512) ? aperiodic_profile_fft(seq, n) : aperiodic_profile_direct(seq, n);
        out[i] = worst_from_profile(r, n);
    };
    workers = std::max<std::size_t>(1, std::min(workers, lengths.size()));
    if (workers == 1) {
        for (std::size_t i = 0; i < lengths.size(); ++i) run_one(i);
    } else {
        std::vector<std::thread> pool;
        std::atomic<std::size_t> next{0};
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next.fetch_add(1); i < lengths.size();
                     i = next.fetch_add(1))
                    run_one(i);
            });
        }
        for (auto& th : pool) th.join();
    }
    return out;
}

WindowedWorstCase windowed_worst_case(const SequenceSpec& spec, std::size_t n,
                                      const ExactInt& lambda_num,
                                      const ExactInt& lambda_den) {
    if (n == 0) throw std::domain_error("windowed_worst_case: n must be >= 1");
    if (lambda_den < 1 || lambda_num < lambda_den)
        throw std::domain_error("windowed_worst_case: lambda must be a rational >= 1");
    std::size_t p = static_cast<std::size_t>(
        to_uint64(floor_div(lambda_num * static_cast<unsigned long>(n), lambda_den)));
    ComplexSequence seq = generate(spec, 0, static_cast<std::int64_t>(p + n));

    WindowedWorstCase best{-1.0, 0, 0, p};
    const std::int64_t pn = static_cast<std::int64_t>(p);
    const std::int64_t nn = static_cast<std::int64_t>(n);

    if (n >= 512) {
        // one FFT of the carrier, then one window FFT per offset t;
        // r(t,tau) sums appear at g[t + tau]
        std::size_t off = static_cast<std::size_t>(-seq.start_index);
        std::vector<std::complex<double>> carrier(seq.samples.begin() + off,
                                                  seq.samples.end());
        const std::size_t m = next_pow2(2 * carrier.size());
        std::vector<std::complex<double>> U(m, {0.0, 0.0});
        for (std::size_t i = 0; i < carrier.size(); ++i) U[i] = carrier[i];
        fft_inplace(U, false);
        for (auto& u : U) u = std::conj(u);

        std::vector<std::complex<double>> W(m);
        for (std::int64_t t = 1; t <= pn; ++t) {
            std::fill(W.begin(), W.end(), std::complex<double>(0.0, 0.0));
            double r0 = 0.0;
            for (std::int64_t j = 0; j <= nn; ++j) {
                W[static_cast<std::size_t>(j)] = carrier[static_cast<std::size_t>(t + j)];
                r0 += std::norm(W[static_cast<std::size_t>(j)]);
            }
            fft_inplace(W, false);
            for (std::size_t k = 0; k < m; ++k) W[k] *= U[k];
            fft_inplace(W, true);
            // ifft(W conj(U))[(m - s) % m] = sum_j w[j] conj(u[j+s])
            for (std::int64_t tau = -t; tau <= pn - t; ++tau) {
                if (tau == 0) continue;
                std::size_t s = static_cast<std::size_t>(t + tau);
                double v = std::abs(W[s == 0 ? 0 : m - s]) / r0;
                if (v > best.max_ratio) best = {v, t, tau, p};
            }
        }
        return best;
    }

    const bool real_path = is_real_sequence(seq);
    for (std::int64_t t = 1; t <= pn; ++t) {
        double r0 = 0.0;
        for (std::int64_t s = t; s <= t + nn; ++s) r0 += std::norm(seq.at(s));
        for (std::int64_t tau = -t; tau <= pn - t; ++tau) {
            if (tau == 0) continue;
            double mag;
            if (real_path) {
                double acc = 0.0;
                for (std::int64_t s = t; s <= t + nn; ++s)
                    acc += seq.at(s).real() * seq.at(s + tau).real();
                mag = std::abs(acc);
            } else {
                std::complex<double> acc(0.0, 0.0);
                for (std::int64_t s = t; s <= t + nn; ++s)
                    acc += seq.at(s) * std::conj(seq.at(s + tau));
                mag = std::abs(acc);
            }
            double v = mag / r0;
            if (v > best.max_ratio) best = {v, t, tau, p};
        }
    }
    return best;
}

double h_bound(std::uint64_t L, double x) {
    if (L == 0) throw std::domain_error("h_bound: L must be >= 1");
    double frac = x - std::floor(x);
    double dist = std::min(frac, 1.0 - frac);
    double Ld = static_cast<double>(L);
    return 3.0 * Ld / (1.0 + Ld * dist);
}

AcfUpperBound acf_upper_bound(const QuadraticIrrational& alpha, std::size_t n,
                              std::size_t tau, double c_extra) {
    if (tau < 1 || tau > n)
        throw std::domain_error("acf_upper_bound: tau must satisfy 1 <= tau <= n");
    ExactInt max_mult = ExactInt(static_cast<unsigned long>(n)) *
                        static_cast<unsigned long>(tau);
    ScaledFracEvaluator ev(alpha, max_mult, 30);
    double nd = static_cast<double>(n);
    double acc = 1.0; // k = 0 term: ||0|| = 0
    for (std::size_t k = 1; k <= n; ++k) {
        ExactInt m = ExactInt(static_cast<unsigned long>(k)) *
                     static_cast<unsigned long>(tau);
        acc += 1.0 / (1.0 + nd * ev.dist(m).value());
    }
    AcfUpperBound out;
    out.sum_term = 3.0 / nd * acc;
    out.bound = std::sqrt(out.sum_term);
    out.bound_with_const = std::sqrt(out.sum_term + c_extra / nd);
    out.c_extra = c_extra;
    return out;
}

DecayFit fit_decay(const std::vector<CurvePoint>& curve) {
    DecayFit fit;
    std::vector<double> xs, ys;
    for (const CurvePoint& pt : curve) {
        if (pt.max_ratio > 0.0) {
            xs.push_back(std::log(static_cast<double>(pt.n)));
            ys.push_back(std::log(pt.max_ratio));
            fit.sample_lengths.push_back(pt.n);
        } else {
            fit.excluded_lengths.push_back(pt.n);
        }
    }
    if (xs.size() < 4)
        throw std::domain_error("fit_decay: need at least 4 positive-ratio points");
    double n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    double denom = n * sxx - sx * sx;
    double slope = (n * sxy - sx * sy) / denom;
    double intercept = (sy - slope * sx) / n;
    fit.gamma = -slope;
    fit.C = std::exp(intercept);
    double ss = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double r = ys[i] - (slope * xs[i] + intercept);
        ss += r * r;
    }
    fit.residual = std::sqrt(ss / n);
    return fit;
}

} // namespace chirpsense

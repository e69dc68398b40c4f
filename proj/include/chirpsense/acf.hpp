#pragma once

#include "chirpsense/sequences.hpp"

#include <complex>
#include <cstddef>
#include <vector>

namespace chirpsense {

// Aperiodic autocorrelation, summation limits exactly as defined:
//   r~(tau) = (1/n) sum_{s=0}^{n-tau} u_s conj(u_{s+tau}),   0 <= tau <= n.
// Note r~(0) = (n+1)/n for unit-modulus input; ratios divide it out.
std::complex<double> aperiodic_acf(const ComplexSequence& seq, std::size_t n,
                                   std::size_t tau);

// Windowed autocorrelation:
//   r(t, tau) = (1/n) sum_{s=t}^{t+n} u_s conj(u_{s+tau}).
std::complex<double> windowed_acf(const ComplexSequence& seq, std::int64_t t,
                                  std::size_t n, std::int64_t tau);

// All aperiodic lags 0..n at once (direct / FFT; both exposed for cross-checks).
std::vector<std::complex<double>> aperiodic_profile_direct(const ComplexSequence& seq,
                                                           std::size_t n);
std::vector<std::complex<double>> aperiodic_profile_fft(const ComplexSequence& seq,
                                                        std::size_t n);

struct CurvePoint {
    std::size_t n;
    double max_ratio;
    std::size_t argmax_tau;
};

// max_{1<=tau<=n} |r~(tau)| / r~(0) for each window length; FFT path for
// n >= 512, direct summation below. Lengths are evaluated independently, so
// they may be distributed over workers; results do not depend on the count.
std::vector<CurvePoint> worst_case_curve(const SequenceSpec& spec,
                                         const std::vector<std::size_t>& lengths,
                                         std::size_t workers = 1);

struct WindowedWorstCase {
    double max_ratio;
    std::int64_t argmax_t;
    std::int64_t argmax_tau;
    std::size_t p;
};

// Double maximum over t in [1, p], tau != 0 with 0 <= t+tau <= p of
// |r(t,tau)| / r(t,0), where p = floor(lambda * n).
WindowedWorstCase windowed_worst_case(const SequenceSpec& spec, std::size_t n,
                                      const ExactInt& lambda_num = 1,
                                      const ExactInt& lambda_den = 1);

// H_L(x) = 3L / (1 + L ||x||), the monotone dominating envelope.
double h_bound(std::uint64_t L, double x);

struct AcfUpperBound {
    double sum_term;         // (3/n) * sum_{k=0}^{n} 1 / (1 + n ||k tau alpha||)
    double bound;            // sqrt(sum_term)
    double bound_with_const; // sqrt(sum_term + c_extra / n)
    double c_extra;
};

// Certified evaluation of the analytic ACF upper bound at lag tau. The
// additive constant is not pinned by the analysis; it is reported separately
// (default 3) rather than folded in silently.
AcfUpperBound acf_upper_bound(const QuadraticIrrational& alpha, std::size_t n,
                              std::size_t tau, double c_extra = 3.0);

struct DecayFit {
    double C = 0.0;
    double gamma = 0.0;
    double residual = 0.0;
    std::vector<std::size_t> sample_lengths;
    std::vector<std::size_t> excluded_lengths; // nonpositive ratios
};

// Least squares on (log n, log max_ratio); gamma = -slope.
DecayFit fit_decay(const std::vector<CurvePoint>& curve);

} // namespace chirpsense

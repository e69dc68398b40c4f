#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace chirpsense {

std::size_t next_pow2(std::size_t n);

// In-place iterative radix-2 FFT; size must be a power of two.
void fft_inplace(std::vector<std::complex<double>>& a, bool inverse);

// Zero-padded autocorrelation sums:
//   c[tau] = sum_{s=0}^{N-1-tau} x[s] * conj(x[s+tau]),  tau = 0 .. N-1.
std::vector<std::complex<double>> autocorrelation_fft(
    const std::vector<std::complex<double>>& x);

// Window-against-carrier correlation sums:
//   g[m] = sum_{j} window[j] * conj(carrier[j+m]),  m = 0 .. max_shift.
std::vector<std::complex<double>> cross_correlation_fft(
    const std::vector<std::complex<double>>& window,
    const std::vector<std::complex<double>>& carrier, std::size_t max_shift);

} // namespace chirpsense

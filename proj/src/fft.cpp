#include "chirpsense/fft.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace chirpsense {

std::size_t next_pow2(std::size_t n) {
    std::size_t m = 1;
    while (m < n) m <<= 1;
    return m;
}

void fft_inplace(std::vector<std::complex<double>>& a, bool inverse) {
    const std::size_t n = a.size();
    if (n == 0 || (n & (n - 1)) != 0)
        throw std::domain_error("fft_inplace: size must be a power of two");

    // bit-reversal permutation
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }

    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = (inverse ? 2.0 : -2.0) * std::numbers::pi /
                           static_cast<double>(len);
        const std::complex<double> wl(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t j = 0; j < len / 2; ++j) {
                std::complex<double> u = a[i + j];
                std::complex<double> v = a[i + j + len / 2] * w;
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
                w *= wl;
            }
        }
    }
    if (inverse) {
        const double inv = 1.0 / static_cast<double>(n);
        for (auto& x : a) x *= inv;
    }
}

std::vector<std::complex<double>> autocorrelation_fft(
    const std::vector<std::complex<double>>& x) {
    const std::size_t n = x.size();
    if (n == 0) return {};
    const std::size_t m = next_pow2(2 * n);
    std::vector<std::complex<double>> buf(m, {0.0, 0.0});
    for (std::size_t i = 0; i < n; ++i) buf[i] = x[i];
    fft_inplace(buf, false);
    for (auto& v : buf) v = v * std::conj(v); // |X|^2, real
    fft_inplace(buf, true);
    // ifft(|X|^2)[tau] = sum_s x[s+tau] conj(x[s]) = conj(c[tau])
    std::vector<std::complex<double>> c(n);
    for (std::size_t tau = 0; tau < n; ++tau) c[tau] = std::conj(buf[tau]);
    return c;
}

std::vector<std::complex<double>> cross_correlation_fft(
    const std::vector<std::complex<double>>& window,
    const std::vector<std::complex<double>>& carrier, std::size_t max_shift) {
    const std::size_t m = next_pow2(window.size() + carrier.size() + max_shift + 1);
    std::vector<std::complex<double>> W(m, {0.0, 0.0}), U(m, {0.0, 0.0});
    for (std::size_t i = 0; i < window.size(); ++i) W[i] = window[i];
    for (std::size_t i = 0; i < carrier.size(); ++i) U[i] = carrier[i];
    fft_inplace(W, false);
    fft_inplace(U, false);
    for (std::size_t k = 0; k < m; ++k) W[k] *= std::conj(U[k]);
    fft_inplace(W, true);
    // ifft(W conj(U))[(m - s) % m] = sum_j w[j] conj(u[j+s])
    std::vector<std::complex<double>> g(max_shift + 1);
    g[0] = W[0];
    for (std::size_t s = 1; s <= max_shift; ++s) g[s] = W[m - s];
    return g;
}

} // namespace chirpsense

#include "chirpsense/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace chirpsense {

std::uint64_t Rng::next_below(std::uint64_t bound) {
    if (bound == 0) throw std::domain_error("Rng::next_below: zero bound");
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t v;
    do {
        v = next_u64();
    } while (v >= limit);
    return v % bound;
}

double Rng::next_gaussian() {
    // Box-Muller; u clamped away from zero so log stays finite.
    double u = next_double();
    double v = next_double();
    if (u < 0x1.0p-60) u = 0x1.0p-60;
    return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * std::numbers::pi * v);
}

std::vector<std::size_t> Rng::sample_without_replacement(std::size_t n, std::size_t k) {
    if (k > n) throw std::domain_error("sample_without_replacement: k exceeds n");
    // partial Fisher-Yates over an index array
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    for (std::size_t i = 0; i < k; ++i) {
        std::size_t j = i + static_cast<std::size_t>(next_below(n - i));
        std::swap(idx[i], idx[j]);
    }
    idx.resize(k);
    std::sort(idx.begin(), idx.end());
    return idx;
}

} // namespace chirpsense

#pragma once

#include "chirpsense/acf.hpp"
#include "chirpsense/linalg.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace chirpsense {

// Toeplitz constructions induced by a probing sequence u:
//  LowerTriangular: n x p, entry(i,j) = u[i-j] for i >= j, else 0
//  ZeroPaddedFat:   (n+p-1) x p, entry(i,j) = u[i-j] for 0 <= i-j <= n-1
//  SteadyState:     n x p, entry(i,j) = u[p + i - j]
enum class ToeplitzKind { LowerTriangular, ZeroPaddedFat, SteadyState };

std::string to_string(ToeplitzKind kind);
ToeplitzKind toeplitz_kind_from_string(const std::string& s);

class SensingMatrix {
public:
    SensingMatrix(ComplexSequence seq, std::size_t n, std::size_t p, ToeplitzKind kind);

    ToeplitzKind kind() const { return kind_; }
    std::size_t n() const { return n_; }
    std::size_t p() const { return p_; }
    std::size_t rows() const;
    std::size_t cols() const { return p_; }
    const ComplexSequence& source() const { return seq_; }

    std::complex<double> entry(std::size_t i, std::size_t j) const;
    std::vector<std::complex<double>> column(std::size_t j) const;
    CMatrix dense() const;

private:
    ComplexSequence seq_;
    std::size_t n_, p_;
    ToeplitzKind kind_;
};

SensingMatrix build_toeplitz(const ComplexSequence& seq, std::size_t n, std::size_t p,
                             ToeplitzKind kind);
// Generates exactly the index range the kind needs.
SensingMatrix build_toeplitz(const SequenceSpec& spec, std::size_t n, std::size_t p,
                             ToeplitzKind kind);

// Normalized correlation matrix of the selected columns (unit diagonal,
// Hermitian). Throws on duplicate/out-of-range indices or zero-norm columns.
CMatrix column_correlation(const SensingMatrix& u, const std::vector<std::size_t>& subset);

struct GershgorinR {
    double full_sum; // sum over all ordered off-diagonal pairs
    double row_max;  // max row sum of off-diagonal magnitudes (certification)
};

// Off-diagonal mass of the row-normalized correlation of the subset columns.
GershgorinR gershgorin_R(const SensingMatrix& u, const std::vector<std::size_t>& subset);

struct SampledSubset {
    std::vector<std::size_t> subset;
    double lambda_min;
    double lambda_max;
    double r_row_max;
};

struct RipReport {
    std::size_t q = 0;             // certified RIP order lower bound
    double r_bound = 0.0;          // worst-subset off-diagonal sum at order q
    bool certified = false;        // r_bound < 1
    std::vector<SampledSubset> sampled;
    double delta_q_estimate = 0.0; // max |lambda - 1| over sampled subsets
};

// Largest q whose q largest normalized correlation magnitudes (over the
// admissible lags of the kind) sum below 1. Certified lower bound on the RIP
// order; the adversarial subset is handled by sorting.
std::size_t rip_order_bound(const SensingMatrix& u);

RipReport rip_report(const SensingMatrix& u, std::size_t sampled_subsets,
                     std::uint64_t rng_seed);

struct FirSystem {
    std::size_t p = 0;
    std::vector<double> g;             // length p, zero off support
    std::vector<std::size_t> support;  // ascending
    double noise_sigma = 0.0;
};

// y = U g + w with w ~ N(0, sigma^2) i.i.d. from the seeded generator,
// added to the real channel.
std::vector<std::complex<double>> simulate_output(const SensingMatrix& u, const FirSystem& sys,
                                                  std::uint64_t rng_seed);

struct OmpResult {
    FirSystem estimate;
    double residual_norm = 0.0;
    std::size_t iterations = 0;
};

// Orthogonal matching pursuit: k rounds of max-correlation column selection
// plus least squares on the active set (normal equations, symmetric
// elimination, pivot tolerance 1e-12).
OmpResult omp_recover(const SensingMatrix& u, const std::vector<std::complex<double>>& y,
                      std::size_t k);

struct CondExperiment {
    std::vector<std::size_t> n_values;
    std::string p_rule = "2n";   // "<k>n", "n/<k>" or a constant
    std::string q_rule = "n/5";
    std::size_t trials = 0;
    std::uint64_t rng_seed = 0;
    std::size_t workers = 1;
};

std::size_t eval_rule(const std::string& rule, std::size_t n);

struct CondRow {
    std::size_t n;
    std::size_t trial;
    double cond_sv;   // sqrt(lambda_max / lambda_min), the headline convention
    double cond_eig;  // lambda_max / lambda_min
};

struct CondSummary {
    std::size_t n;
    std::size_t trials;
    double min, median, max, mean; // of cond_sv
};

struct CondResults {
    std::vector<CondRow> rows;       // ordered by (n, trial)
    std::vector<CondSummary> summary;
};

// Seeded condition-number Monte Carlo over random column subsets of the
// SteadyState matrix built from seq_spec (per-cell seeds derived from
// rng_seed, so results are identical for any worker count).
CondResults cond_mc(const CondExperiment& exp, const SequenceSpec& seq_spec);

} // namespace chirpsense

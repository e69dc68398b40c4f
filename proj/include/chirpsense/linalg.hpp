#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace chirpsense {

// Minimal dense complex matrix, row major.
struct CMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<std::complex<double>> data;

    CMatrix() = default;
    CMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, {0.0, 0.0}) {}

    std::complex<double>& at(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    const std::complex<double>& at(std::size_t i, std::size_t j) const {
        return data[i * cols + j];
    }
    bool is_real(double tol = 0.0) const;
};

// Largest |A(i,j) - conj(A(j,i))| over all pairs.
double hermitian_defect(const CMatrix& a);

// All eigenvalues of a Hermitian matrix by the cyclic Jacobi rotation scheme,
// ascending. Complex input goes through the real symmetric embedding of twice
// the dimension (each eigenvalue doubled, values unchanged). Sweeps run until
// the off-diagonal Frobenius norm drops below off_tol (absolute, relative to
// max(1, ||A||_F)).
std::vector<double> jacobi_eigenvalues(const CMatrix& a, double off_tol = 1e-10,
                                       int max_sweeps = 64);

struct EigExtremes {
    double lambda_min;
    double lambda_max;
};

// Extreme eigenvalues via full Jacobi diagonalization. Input must be
// Hermitian within 1e-8 and of dimension <= 512.
EigExtremes eig_extremes(const CMatrix& sigma);

// Solves the Hermitian positive (semi)definite system G x = b by symmetric
// elimination (LDL^H without pivoting). Throws IllConditionedError when a
// pivot magnitude falls below pivot_tol * max(1, max_ii |G(i,i)|).
std::vector<std::complex<double>> solve_hermitian(
    CMatrix g, std::vector<std::complex<double>> b, double pivot_tol = 1e-12);

} // namespace chirpsense

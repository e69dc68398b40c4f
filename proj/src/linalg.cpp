#include "chirpsense/linalg.hpp"

#include "chirpsense/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace chirpsense {

bool CMatrix::is_real(double tol) const {
    for (const auto& v : data)
        if (std::abs(v.imag()) > tol) return false;
    return true;
}

double hermitian_defect(const CMatrix& a) {
    if (a.rows != a.cols) throw std::domain_error("hermitian_defect: matrix must be square");
    double worst = 0.0;
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t j = i; j < a.cols; ++j)
            worst = std::max(worst, std::abs(a.at(i, j) - std::conj(a.at(j, i))));
    return worst;
}

namespace {

// Cyclic Jacobi on a real symmetric matrix held in a dense buffer.
std::vector<double> jacobi_real(std::vector<double>& a, std::size_t n, double off_tol,
                                int max_sweeps) {
    auto idx = [n](std::size_t i, std::size_t j) { return i * n + j; };

    double fro = 0.0;
    for (std::size_t i = 0; i < n * n; ++i) fro += a[i] * a[i];
    fro = std::sqrt(fro);
    const double stop = off_tol * std::max(1.0, fro);

    auto off_norm = [&] {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) s += 2.0 * a[idx(i, j)] * a[idx(i, j)];
        return std::sqrt(s);
    };

    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        if (off_norm() <= stop) break;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                double apq = a[idx(p, q)];
                if (apq == 0.0) continue;
                double app = a[idx(p, p)], aqq = a[idx(q, q)];
                double theta = 0.5 * (aqq - app) / apq;
                double t = (theta >= 0 ? 1.0 : -1.0) /
                           (std::abs(theta) + std::sqrt(1.0 + theta * theta));
                double c = 1.0 / std::sqrt(1.0 + t * t);
                double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    double akp = a[idx(k, p)], akq = a[idx(k, q)];
                    a[idx(k, p)] = c * akp - s * akq;
                    a[idx(k, q)] = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    double apk = a[idx(p, k)], aqk = a[idx(q, k)];
                    a[idx(p, k)] = c * apk - s * aqk;
                    a[idx(q, k)] = s * apk + c * aqk;
                }
            }
        }
    }

    std::vector<double> eig(n);
    for (std::size_t i = 0; i < n; ++i) eig[i] = a[idx(i, i)];
    std::sort(eig.begin(), eig.end());
    return eig;
}

} // namespace

std::vector<double> jacobi_eigenvalues(const CMatrix& m, double off_tol, int max_sweeps) {
    if (m.rows != m.cols) throw std::domain_error("jacobi_eigenvalues: matrix must be square");
    const std::size_t n = m.rows;
    if (m.is_real()) {
        std::vector<double> a(n * n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) a[i * n + j] = m.at(i, j).real();
        return jacobi_real(a, n, off_tol, max_sweeps);
    }
    // Hermitian M = A + iB embeds as [[A, -B], [B, A]], symmetric with the
    // same eigenvalues at doubled multiplicity.
    const std::size_t N = 2 * n;
    std::vector<double> a(N * N);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            double re = m.at(i, j).real(), im = m.at(i, j).imag();
            a[i * N + j] = re;
            a[i * N + (n + j)] = -im;
            a[(n + i) * N + j] = im;
            a[(n + i) * N + (n + j)] = re;
        }
    }
    return jacobi_real(a, N, off_tol, max_sweeps);
}

EigExtremes eig_extremes(const CMatrix& sigma) {
    if (sigma.rows != sigma.cols) throw std::domain_error("eig_extremes: matrix must be square");
    if (sigma.rows == 0) throw std::domain_error("eig_extremes: empty matrix");
    if (sigma.rows > 512) throw std::domain_error("eig_extremes: dimension exceeds 512");
    if (hermitian_defect(sigma) > 1e-8)
        throw std::domain_error("eig_extremes: input is not Hermitian within 1e-8");
    std::vector<double> eig = jacobi_eigenvalues(sigma);
    return EigExtremes{eig.front(), eig.back()};
}

std::vector<std::complex<double>> solve_hermitian(CMatrix g, std::vector<std::complex<double>> b,
                                                  double pivot_tol) {
    const std::size_t n = g.rows;
    if (g.cols != n || b.size() != n) throw std::domain_error("solve_hermitian: shape mismatch");
    double ref = 1.0;
    for (std::size_t i = 0; i < n; ++i) ref = std::max(ref, std::abs(g.at(i, i)));
    const double limit = pivot_tol * ref;

    // forward elimination on the Hermitian matrix
    for (std::size_t k = 0; k < n; ++k) {
        std::complex<double> piv = g.at(k, k);
        if (std::abs(piv) <= limit)
            throw IllConditionedError("solve_hermitian: pivot " + std::to_string(std::abs(piv)) +
                                      " below tolerance (rank-deficient active set)");
        for (std::size_t i = k + 1; i < n; ++i) {
            std::complex<double> f = g.at(i, k) / piv;
            if (f == std::complex<double>(0.0, 0.0)) continue;
            for (std::size_t j = k; j < n; ++j) g.at(i, j) -= f * g.at(k, j);
            b[i] -= f * b[k];
        }
    }
    // back substitution
    std::vector<std::complex<double>> x(n);
    for (std::size_t k = n; k-- > 0;) {
        std::complex<double> acc = b[k];
        for (std::size_t j = k + 1; j < n; ++j) acc -= g.at(k, j) * x[j];
        x[k] = acc / g.at(k, k);
    }
    return x;
}

} // namespace chirpsense

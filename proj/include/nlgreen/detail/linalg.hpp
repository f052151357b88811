// Small dense solvers: forward substitution for the triangular alpha system
// and Householder least squares for the window-fit strategy.
#ifndef NLGREEN_DETAIL_LINALG_HPP
#define NLGREEN_DETAIL_LINALG_HPP

#include <cmath>
#include <stdexcept>
#include <vector>

namespace nlgreen::detail {

/// Solve L x = b for lower-triangular L (row-major n x n).
inline std::vector<double> solve_lower_triangular(const std::vector<double>& L,
                                                  const std::vector<double>& b, std::size_t n) {
    std::vector<double> x(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double acc = b[i];
        for (std::size_t j = 0; j < i; ++j) acc -= L[i * n + j] * x[j];
        const double d = L[i * n + i];
        if (d == 0.0) throw std::runtime_error("triangular solve: zero diagonal");
        x[i] = acc / d;
    }
    return x;
}

/// Least squares min ||A x - b|| by Householder QR; A is row-major m x n,
/// m >= n, destroyed in place.
inline std::vector<double> least_squares(std::vector<double> A, std::vector<double> b,
                                         std::size_t m, std::size_t n) {
    if (m < n) throw std::invalid_argument("least_squares: needs m >= n");
    for (std::size_t k = 0; k < n; ++k) {
        double norm = 0.0;
        for (std::size_t i = k; i < m; ++i) norm += A[i * n + k] * A[i * n + k];
        norm = std::sqrt(norm);
        if (norm == 0.0) throw std::runtime_error("least_squares: rank-deficient column");
        if (A[k * n + k] > 0) norm = -norm;
        // Householder vector v stored in column k (v_k = a_kk - norm)
        double vkk = A[k * n + k] - norm;
        A[k * n + k] = vkk;
        double vtv = vkk * vkk;
        for (std::size_t i = k + 1; i < m; ++i) vtv += A[i * n + k] * A[i * n + k];
        // apply to remaining columns and to b
        for (std::size_t j = k + 1; j < n; ++j) {
            double dot = 0.0;
            for (std::size_t i = k; i < m; ++i) dot += A[i * n + k] * A[i * n + j];
            const double f = 2.0 * dot / vtv;
            for (std::size_t i = k; i < m; ++i) A[i * n + j] -= f * A[i * n + k];
        }
        double dotb = 0.0;
        for (std::size_t i = k; i < m; ++i) dotb += A[i * n + k] * b[i];
        const double fb = 2.0 * dotb / vtv;
        for (std::size_t i = k; i < m; ++i) b[i] -= fb * A[i * n + k];
        A[k * n + k] = norm;  // R diagonal
    }
    // back substitution on R
    std::vector<double> x(n, 0.0);
    for (std::size_t ii = n; ii-- > 0;) {
        double acc = b[ii];
        for (std::size_t j = ii + 1; j < n; ++j) acc -= A[ii * n + j] * x[j];
        x[ii] = acc / A[ii * n + ii];
    }
    return x;
}

}  // namespace nlgreen::detail

#endif  // NLGREEN_DETAIL_LINALG_HPP

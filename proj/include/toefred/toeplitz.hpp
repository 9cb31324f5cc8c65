#pragma once

// Toeplitz matrix (phi_{i-j}) and its determinant D_n in complex arithmetic.

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <Eigen/LU>
#include <toefred/series.hpp>

namespace toefred {

// Entry (i, j) = phi_{i-j}, 0 <= i, j < n. The window must actually cover
// [-(n-1), n-1]: missing coefficients are an error, never zero-filled.
inline Eigen::MatrixXcd toeplitz_matrix(const LaurentSeries& phi, int n) {
    if (n < 1) throw std::invalid_argument("toeplitz_matrix: n must be >= 1");
    if (phi.lo > -(n - 1) || phi.hi() < n - 1)
        throw std::invalid_argument("toeplitz_matrix: window [" + std::to_string(phi.lo) + ", " +
                                    std::to_string(phi.hi()) + "] does not cover [" +
                                    std::to_string(-(n - 1)) + ", " + std::to_string(n - 1) + "]");
    Eigen::MatrixXcd m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = phi.at(i - j);
    return m;
}

// Determinant with a log-magnitude/phase decomposition that survives growth:
// value = phase * exp(log_abs), |phase| = 1 (or 0 for a singular matrix).
struct DetResult {
    cplx value;
    double log_abs;
    cplx phase;
};

inline DetResult det(const Eigen::MatrixXcd& m) {
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(m);
    double log_abs = 0.0;
    cplx phase = double(lu.permutationP().determinant());
    for (int i = 0; i < m.rows(); ++i) {
        const cplx u = lu.matrixLU()(i, i);
        const double au = std::abs(u);
        if (au == 0.0) return {cplx{}, -std::numeric_limits<double>::infinity(), cplx{}};
        log_abs += std::log(au);
        phase *= u / au;
    }
    return {phase * std::exp(log_abs), log_abs, phase};
}

// D_n(phi) = det(phi_{i-j})_{0 <= i,j < n}; D_0 = 1 by convention.
inline DetResult toeplitz_det(const LaurentSeries& phi, int n) {
    if (n == 0) return {cplx{1.0}, 0.0, cplx{1.0}};
    return det(toeplitz_matrix(phi, n));
}

} // namespace toefred

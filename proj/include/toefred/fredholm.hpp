#pragma once

#include <Eigen/LU>
#include <numeric>
#include <stdexcept>
#include <vector>

#include <toefred/kernel.hpp>

namespace toefred {

// Outcome of a finite-section Fredholm determinant evaluation.
struct FredholmResult {
    cplx value{1.0};
    int M = 0;              // section size actually used
    double tail_bound = 0;  // decay-model estimate of the truncation error
    bool converged = false;
};

// C * sum over i,j >= n with i+j >= 2n+2M of rho^{-(i+j)}.
// There are t-2n+1 admissible pairs on the anti-diagonal i+j = t, so the sum is
// C * x^{2n+2M} * ((2M+1)/(1-x) + x/(1-x)^2) with x = 1/rho.
inline double decay_tail_sum(const DecayBound& b, int n, int M) {
    if (!(b.rho > 1.0)) return std::numeric_limits<double>::infinity();
    const double x = 1.0 / b.rho;
    const double lead = b.C * std::pow(x, 2.0 * n + 2.0 * M);
    return lead * ((2.0 * M + 1.0) / (1.0 - x) + x / ((1.0 - x) * (1.0 - x)));
}

// det(1-K) on the space of square-summable sequences supported on {n, n+1, ...},
// approximated by the M x M leading section and LU. M doubles from 8 until both
// the decay-model tail estimate and the last doubling's change fall below
// rel_tol (relative to |value|). Failure to converge by max_section is reported
// in the result rather than thrown, so callers can show diagnostics.
inline FredholmResult det_truncated(const KernelSource& src, int n, double rel_tol,
                                    int max_section = 4096) {
    if (!(rel_tol > 0.0)) throw std::invalid_argument("det_truncated: rel_tol must be positive");
    if (n < 0) throw std::invalid_argument("det_truncated: start index must be nonnegative");
    if (max_section < 8) throw std::invalid_argument("det_truncated: max_section must be >= 8");

    cplx prev{};
    bool has_prev = false;
    cplx value{1.0};
    double tail = 0.0;
    int M = 8;
    for (; M <= max_section; M *= 2) {
        Eigen::MatrixXcd A = -kernel_block(src, n, M);
        A.diagonal().array() += 1.0;
        value = Eigen::PartialPivLU<Eigen::MatrixXcd>(A).determinant();
        tail = decay_tail_sum(src.decay, n, M);

        const double scale = std::max(std::abs(value), 1e-300);
        const bool tail_ok = tail <= rel_tol * scale;
        const bool change_ok = !has_prev || std::abs(value - prev) <= rel_tol * scale;
        if (tail_ok && change_ok) return {value, M, tail, true};
        prev = value;
        has_prev = true;
    }
    return {value, M / 2, tail, false};
}

// The literal inclusion-exclusion expansion of det(1-K):
//   sum_{m=0}^{m_max} (-1)^m sum_{n <= l_1 < ... < l_m <= l_max} det[K(l_a, l_b)].
// Exponential in m, so only a small-scale oracle; m_max is capped at 4.
inline cplx det_series(const KernelSource& src, int n, int m_max, int l_max) {
    if (m_max < 0 || m_max > 4)
        throw std::invalid_argument("det_series: m_max must be in [0, 4]");
    if (n < 0) throw std::invalid_argument("det_series: start index must be nonnegative");

    cplx total{1.0};  // the empty (m = 0) term
    const int W = l_max - n + 1;
    if (W <= 0 || m_max == 0) return total;

    const Eigen::MatrixXcd K = kernel_block(src, n, W);
    for (int m = 1; m <= std::min(m_max, W); ++m) {
        const double sign = (m % 2 != 0) ? -1.0 : 1.0;
        std::vector<int> c(m);
        std::iota(c.begin(), c.end(), 0);
        while (true) {
            Eigen::MatrixXcd minor(m, m);
            for (int a = 0; a < m; ++a)
                for (int b = 0; b < m; ++b) minor(a, b) = K(c[a], c[b]);
            total += sign * Eigen::PartialPivLU<Eigen::MatrixXcd>(minor).determinant();

            int p = m - 1;
            while (p >= 0 && c[p] == W - m + p) --p;
            if (p < 0) break;
            ++c[p];
            for (int q = p + 1; q < m; ++q) c[q] = c[q - 1] + 1;
        }
    }
    return total;
}

} // namespace toefred

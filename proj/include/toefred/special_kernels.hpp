#pragma once

// Closed-form kernels for the three preset families. Off-diagonal entries use
// the integrable (rank-2 numerator) expressions; diagonal entries are ALWAYS
// summed from the closed-form E/F coefficient formulas, never from parameter
// derivatives of special functions.

#include <stdexcept>
#include <utility>

#include <toefred/kernel.hpp>
#include <toefred/special.hpp>
#include <toefred/symbol.hpp>

namespace toefred {

namespace detail {

inline void check_indices(int i, int j) {
    if (i < 0 || j < 0) throw std::invalid_argument("kernel: indices must be nonnegative");
}

// Diagonal entry sum_{l>=1} E_{i+l} F_{-(i+l)} from closed-form coefficient
// evaluators, extended until the tail is negligible.
template <class CoeffE, class CoeffF>
cplx diagonal_from_coeffs(int i, const CoeffE& E, const CoeffF& F, int l_cap) {
    cplx sum{};
    for (int l = 1; l <= l_cap; ++l) {
        const cplx term = E(i + l) * F(i + l);
        sum += term;
        if (std::abs(term) < 1e-17 * (std::abs(sum) + 1e-300)) return sum;
    }
    throw std::runtime_error("closed-form diagonal series did not converge");
}

} // namespace detail

// --- Bessel family: E_k = F_{-k} = J_k(2 theta) -----------------------------

// K(i,j) = theta (J_i J_{j+1} - J_{i+1} J_j)(2 theta) / (i-j) off the
// diagonal; K(i,i) = sum_{l>=1} J_{i+l}(2 theta)^2.
inline cplx bessel_kernel(int i, int j, cplx theta) {
    detail::check_indices(i, j);
    const cplx x = 2.0 * theta;
    if (i != j) {
        auto jv = bessel_j_array(std::max(i, j) + 1, x);
        return theta * (jv[i] * jv[j + 1] - jv[i + 1] * jv[j]) / double(i - j);
    }
    for (int w = i + 64; w <= i + 512; w *= 2) {
        auto jv = bessel_j_array(w, x);
        cplx sum{};
        for (int l = 1; i + l <= w; ++l) {
            const cplx term = jv[i + l] * jv[i + l];
            sum += term;
            if (std::abs(term) < 1e-17 * (std::abs(sum) + 1e-300)) return sum;
        }
    }
    throw std::runtime_error("bessel_kernel: diagonal series did not converge");
}

// --- Charlier family ---------------------------------------------------------

// E_m = theta^m (kappa)_m / m! e^{-theta^2} Phi(1-kappa, m+1; theta^2),
// F_{-m} = theta^m / m!           Phi(-kappa,  m+1; theta^2).
inline cplx charlier_E(int m, cplx kappa, cplx theta) {
    const cplx t2 = theta * theta;
    return std::pow(theta, m) * pochhammer(kappa, m) / factorial(m) * std::exp(-t2) *
           hyp1f1(1.0 - kappa, double(m + 1), t2);
}

inline cplx charlier_F(int m, cplx kappa, cplx theta) {
    const cplx t2 = theta * theta;
    return std::pow(theta, m) / factorial(m) * hyp1f1(-kappa, double(m + 1), t2);
}

inline cplx charlier_kernel(int i, int j, cplx kappa, cplx theta) {
    detail::check_indices(i, j);
    if (!(std::abs(theta) < 1.0))
        throw std::invalid_argument("charlier_kernel: requires |theta| < 1");
    if (i == j)
        return detail::diagonal_from_coeffs(
            i, [&](int m) { return charlier_E(m, kappa, theta); },
            [&](int m) { return charlier_F(m, kappa, theta); }, 170 - i);
    const cplx t2 = theta * theta;
    return std::pow(theta, i + j + 2) * pochhammer(kappa, i + 1) * std::exp(-t2) /
           double(i - j) *
           (hyp1f1(-kappa, double(i + 1), t2) / factorial(i) *
                hyp1f1(1.0 - kappa, double(j + 2), t2) / factorial(j + 1) -
            hyp1f1(1.0 - kappa, double(i + 2), t2) / factorial(i + 1) *
                hyp1f1(-kappa, double(j + 1), t2) / factorial(j));
}

// --- Hypergeometric family ---------------------------------------------------

// E_m = xi^m (z)_m / m!  F(z+m, -z'; m+1; xi^2),
// F_{-m} = xi^m (z')_m / m!  F(-z, z'+m; m+1; xi^2).
inline cplx hypergeom_E(int m, cplx z, cplx zp, cplx xi) {
    return std::pow(xi, m) * pochhammer(z, m) / factorial(m) *
           hyp2f1(z + double(m), -zp, double(m + 1), xi * xi);
}

inline cplx hypergeom_F(int m, cplx z, cplx zp, cplx xi) {
    return std::pow(xi, m) * pochhammer(zp, m) / factorial(m) *
           hyp2f1(-z, zp + double(m), double(m + 1), xi * xi);
}

// The closed-form off-diagonal has one denominator whose reading is
// ambiguous; both are implemented and the source constructor picks the one
// matching the generic series route (see make_hypergeom_source).
enum class IndexReading { denom_i_plus_1, denom_i_plus_2 };

inline cplx hypergeom_kernel(int i, int j, cplx z, cplx zp, cplx xi,
                             IndexReading reading = IndexReading::denom_i_plus_1) {
    detail::check_indices(i, j);
    if (!(std::abs(xi) < 1.0))
        throw std::invalid_argument("hypergeom_kernel: requires |xi| < 1");
    if (i == j)
        return detail::diagonal_from_coeffs(
            i, [&](int m) { return hypergeom_E(m, z, zp, xi); },
            [&](int m) { return hypergeom_F(m, z, zp, xi); }, 2000);
    const cplx x2 = xi * xi, w = x2 / (x2 - 1.0);
    const double last_denom = reading == IndexReading::denom_i_plus_1 ? double(i + 1) : double(i + 2);
    return pochhammer(z, i + 1) * pochhammer(zp, j + 1) / (factorial(i) * factorial(j)) *
           std::pow(xi, i + j + 2) * std::pow(1.0 - x2, z + zp - 1.0) / double(i - j) *
           (hyp2f1(-z, -zp, double(i + 1), w) * hyp2f1(1.0 - z, 1.0 - zp, double(j + 2), w) /
                double(j + 1) -
            hyp2f1(1.0 - z, 1.0 - zp, double(i + 2), w) * hyp2f1(-z, -zp, double(j + 1), w) /
                last_denom);
}

// --- KernelSource constructors ----------------------------------------------

inline KernelSource make_bessel_source(cplx theta) {
    auto eval = [theta](int i, int j) { return bessel_kernel(i, j, theta); };
    KernelSource src;
    src.eval = eval;
    src.method = KernelMethod::closed_form;
    src.decay = fit_decay(eval, rho_default(preset_bessel(theta)));
    return src;
}

inline KernelSource make_charlier_source(cplx kappa, cplx theta) {
    auto eval = [kappa, theta](int i, int j) { return charlier_kernel(i, j, kappa, theta); };
    KernelSource src;
    src.eval = eval;
    src.method = KernelMethod::closed_form;
    src.decay = fit_decay(eval, rho_default(preset_charlier(kappa, theta)));
    return src;
}

// Which denominator reading the generic series route confirms, with the
// deviations both readings produced on the off-diagonal 3x3 probe.
struct IndexAdjudication {
    IndexReading chosen;
    double err_chosen;
    double err_rejected;
};

inline std::pair<KernelSource, IndexAdjudication> make_hypergeom_source(cplx z, cplx zp, cplx xi) {
    SeriesKernel generic(preset_hypergeometric(z, zp, xi));
    double err1 = 0.0, err2 = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            if (i == j) continue;
            const cplx ref = generic(i, j);
            err1 = std::max(err1, std::abs(hypergeom_kernel(i, j, z, zp, xi,
                                                            IndexReading::denom_i_plus_1) - ref));
            err2 = std::max(err2, std::abs(hypergeom_kernel(i, j, z, zp, xi,
                                                            IndexReading::denom_i_plus_2) - ref));
        }
    IndexAdjudication adj{err1 <= err2 ? IndexReading::denom_i_plus_1 : IndexReading::denom_i_plus_2,
                         std::min(err1, err2), std::max(err1, err2)};
    auto eval = [z, zp, xi, reading = adj.chosen](int i, int j) {
        return hypergeom_kernel(i, j, z, zp, xi, reading);
    };
    KernelSource src;
    src.eval = eval;
    src.method = KernelMethod::closed_form;
    src.decay = fit_decay(eval, rho_default(preset_hypergeometric(z, zp, xi)));
    return {std::move(src), adj};
}

} // namespace toefred

#pragma once

// Scalar special functions needed by the closed-form kernels: integer-order
// Bessel J for complex argument, Kummer 1F1, and Gauss 2F1.

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

namespace toefred {

using cplx = std::complex<double>;

namespace detail {

inline bool is_nonpositive_integer(cplx z) {
    return z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real());
}

} // namespace detail

// (a)_n = a (a+1) ... (a+n-1); (a)_0 = 1.
inline cplx pochhammer(cplx a, int n) {
    if (n < 0) throw std::invalid_argument("pochhammer: negative n");
    cplx p = 1.0;
    for (int k = 0; k < n; ++k) p *= a + double(k);
    return p;
}

// n! as double; overflows to +inf past n = 170.
inline double factorial(int n) {
    if (n < 0) throw std::invalid_argument("factorial: negative n");
    return std::tgamma(double(n) + 1.0);
}

namespace detail {

// Power series sum_m (-1)^m (x/2)^{n+2m} / (m! (n+m)!), safe from
// cancellation for small |x|.
inline cplx bessel_j_power_series(int n, cplx x) {
    const cplx half = 0.5 * x;
    cplx term = 1.0;
    for (int k = 1; k <= n; ++k) term *= half / double(k);
    cplx sum = term;
    for (int m = 1; m < 64; ++m) {
        term *= -(half * half) / double(m) / double(n + m);
        sum += term;
        if (std::abs(term) <= 1e-18 * std::abs(sum)) break;
    }
    return sum;
}

// One downward (Miller) sweep from trial order M, normalized through
// J_0(x) + 2 sum_{k>=1} J_{2k}(x) = 1, which holds for all complex x.
inline std::vector<cplx> bessel_miller_sweep(int n_max, cplx x, int M) {
    std::vector<cplx> f(static_cast<size_t>(n_max) + 1);
    cplx fkp1 = 0.0, fk = 1e-30;
    cplx even_sum = (M % 2 == 0) ? fk : cplx{};
    for (int k = M; k >= 1; --k) {
        cplx fkm1 = (2.0 * double(k) / x) * fk - fkp1;
        if (std::abs(fkm1) > 1e250) {
            constexpr double s = 1e-250;
            fkm1 *= s, fk *= s, even_sum *= s;
            for (auto& v : f) v *= s;
        }
        if ((k - 1) % 2 == 0 && k - 1 >= 2) even_sum += fkm1;
        if (k - 1 <= n_max) f[static_cast<size_t>(k - 1)] = fkm1;
        fkp1 = fk, fk = fkm1;
    }
    const cplx norm = f[0] + 2.0 * even_sum;
    for (auto& v : f) v /= norm;
    return f;
}

} // namespace detail

// J_0(x) .. J_{n_max}(x) for complex x: direct power series for small |x|,
// otherwise Miller's downward recurrence with the starting order raised until
// two sweeps agree.
inline std::vector<cplx> bessel_j_array(int n_max, cplx x) {
    if (n_max < 0) throw std::invalid_argument("bessel_j_array: negative n_max");
    std::vector<cplx> out(static_cast<size_t>(n_max) + 1);
    const double ax = std::abs(x);
    if (ax == 0.0) {
        out[0] = 1.0;
        return out;
    }
    if (ax <= 1.5) {
        for (int n = 0; n <= n_max; ++n)
            out[static_cast<size_t>(n)] = detail::bessel_j_power_series(n, x);
        return out;
    }
    int M = std::max(n_max, static_cast<int>(std::ceil(ax))) + 48;
    auto prev = detail::bessel_miller_sweep(n_max, x, M);
    for (int attempt = 0; attempt < 8; ++attempt) {
        auto next = detail::bessel_miller_sweep(n_max, x, M + 32);
        double diff = 0.0, scale = 0.0;
        for (int k = 0; k <= n_max; ++k) {
            diff = std::max(diff, std::abs(prev[static_cast<size_t>(k)] - next[static_cast<size_t>(k)]));
            scale = std::max(scale, std::abs(next[static_cast<size_t>(k)]));
        }
        if (diff <= 1e-14 * std::max(scale, 1e-300)) return next;
        prev = std::move(next);
        M += 64;
    }
    throw std::runtime_error("bessel_j_array: Miller recurrence did not stabilize");
}

// J_n(x) for any integer order; J_{-n}(x) = (-1)^n J_n(x).
inline cplx bessel_j(int n, cplx x) {
    const int m = std::abs(n);
    const cplx v = bessel_j_array(m, x)[static_cast<size_t>(m)];
    return (n < 0 && m % 2 == 1) ? -v : v;
}

namespace detail {

// Shared series driver for 1F1 / 2F1: ratio(m) = term_{m+1} / term_m.
template <class Ratio>
cplx hyp_series(Ratio ratio, int cap, const char* who) {
    cplx sum = 1.0, term = 1.0;
    int small_in_a_row = 0;
    for (int m = 0; m < cap; ++m) {
        term *= ratio(m);
        sum += term;
        if (term == cplx{}) return sum; // terminating (polynomial) case
        small_in_a_row = (std::abs(term) <= 1e-17 * std::abs(sum)) ? small_in_a_row + 1 : 0;
        if (small_in_a_row >= 2) return sum;
    }
    throw std::runtime_error(std::string(who) + ": series did not converge");
}

inline cplx hyp2f1_series(cplx a, cplx b, cplx c, cplx x) {
    return hyp_series(
        [&](int m) {
            const double dm = double(m);
            return (a + dm) * (b + dm) / (c + dm) * x / (dm + 1.0);
        },
        20000, "hyp2f1");
}

} // namespace detail

// Kummer confluent hypergeometric Phi(a; c; x).
inline cplx hyp1f1(cplx a, cplx c, cplx x) {
    if (detail::is_nonpositive_integer(c))
        throw std::invalid_argument("hyp1f1: c must not be a nonpositive integer");
    return detail::hyp_series(
        [&](int m) {
            const double dm = double(m);
            return (a + dm) / (c + dm) * x / (dm + 1.0);
        },
        10000, "hyp1f1");
}

// Gauss hypergeometric F(a, b; c; x). Terminating cases sum directly; for
// |x| >= 0.8 the Pfaff map x -> x/(x-1) shrinks the argument first:
// F(a, b; c; x) = (1-x)^{-a} F(a, c-b; c; x/(x-1)).
inline cplx hyp2f1(cplx a, cplx b, cplx c, cplx x) {
    if (detail::is_nonpositive_integer(c))
        throw std::invalid_argument("hyp2f1: c must not be a nonpositive integer");
    if (detail::is_nonpositive_integer(a) || detail::is_nonpositive_integer(b))
        return detail::hyp2f1_series(a, b, c, x);
    if (std::abs(x) < 0.8) return detail::hyp2f1_series(a, b, c, x);
    if (std::abs(1.0 - x) < 1e-8) throw std::runtime_error("hyp2f1: argument too close to 1");
    const cplx xp = x / (x - 1.0);
    if (std::abs(xp) >= 0.95)
        throw std::runtime_error("hyp2f1: argument outside the supported region");
    return std::pow(1.0 - x, -a) * detail::hyp2f1_series(a, c - b, c, xp);
}

} // namespace toefred

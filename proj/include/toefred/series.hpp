#pragma once

// Laurent series on finite index windows over complex<double>: windowed
// products, exponentials of one- and two-sided series, and coefficient
// extraction by trapezoid-rule contour quadrature on circles.

#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace toefred {

using cplx = std::complex<double>;

// Coefficients c[k - lo] for k in [lo, hi]; identically zero outside.
struct LaurentSeries {
    int lo = 0;
    std::vector<cplx> c;

    LaurentSeries() = default;
    LaurentSeries(int lo_, int hi_)
        : lo(lo_), c(hi_ >= lo_ ? static_cast<size_t>(hi_ - lo_ + 1) : 0) {
        if (hi_ < lo_) throw std::invalid_argument("LaurentSeries: window hi < lo");
    }

    int hi() const { return lo + static_cast<int>(c.size()) - 1; }
    bool in_window(int k) const { return k >= lo && k <= hi(); }
    cplx at(int k) const { return in_window(k) ? c[static_cast<size_t>(k - lo)] : cplx{}; }
    cplx& ref(int k) {
        if (!in_window(k)) throw std::out_of_range("LaurentSeries: index outside window");
        return c[static_cast<size_t>(k - lo)];
    }
    void set(int k, cplx v) { ref(k) = v; }

    double max_abs() const {
        double m = 0.0;
        for (const auto& x : c) m = std::max(m, std::abs(x));
        return m;
    }
};

// Cauchy product, keeping only coefficients in [out_lo, out_hi].
inline LaurentSeries laurent_mul(const LaurentSeries& a, const LaurentSeries& b,
                                 int out_lo, int out_hi) {
    LaurentSeries out(out_lo, out_hi);
    for (int p = a.lo; p <= a.hi(); ++p) {
        const cplx ap = a.at(p);
        if (ap == cplx{}) continue;
        const int qlo = std::max(b.lo, out_lo - p);
        const int qhi = std::min(b.hi(), out_hi - p);
        for (int q = qlo; q <= qhi; ++q) out.ref(p + q) += ap * b.at(q);
    }
    return out;
}

namespace detail {

// b = exp(a) for a supported on {1..}, via m*b_m = sum_k k*a_k*b_{m-k}.
inline std::vector<cplx> exp_pos_side(const LaurentSeries& a, int cutoff) {
    std::vector<cplx> b(static_cast<size_t>(cutoff) + 1);
    b[0] = 1.0;
    for (int m = 1; m <= cutoff; ++m) {
        cplx s{};
        const int klo = std::max(1, a.lo), khi = std::min(m, a.hi());
        for (int k = klo; k <= khi; ++k) s += double(k) * a.at(k) * b[static_cast<size_t>(m - k)];
        b[static_cast<size_t>(m)] = s / double(m);
    }
    return b;
}

inline LaurentSeries mirror(const LaurentSeries& a) {
    LaurentSeries out(-a.hi(), -a.lo);
    for (int k = a.lo; k <= a.hi(); ++k) out.set(-k, a.at(k));
    return out;
}

} // namespace detail

// exp of a strictly one-sided series: support within {1,2,...} (result on
// [0, cutoff]) or within {...,-2,-1} (result on [-cutoff, 0]). The constant
// term of the result is exactly 1.
inline LaurentSeries onesided_exp(const LaurentSeries& a, int cutoff) {
    if (cutoff < 0) throw std::invalid_argument("onesided_exp: negative cutoff");
    bool has_pos = false, has_neg = false, has_zero = false;
    for (int k = a.lo; k <= a.hi(); ++k) {
        if (a.at(k) == cplx{}) continue;
        (k > 0 ? has_pos : k < 0 ? has_neg : has_zero) = true;
    }
    if (has_zero || (has_pos && has_neg))
        throw std::invalid_argument("onesided_exp: input must be strictly one-sided");
    if (has_neg) {
        auto b = detail::exp_pos_side(detail::mirror(a), cutoff);
        LaurentSeries out(-cutoff, 0);
        for (int m = 0; m <= cutoff; ++m) out.set(-m, b[static_cast<size_t>(m)]);
        return out;
    }
    auto b = detail::exp_pos_side(a, cutoff);
    LaurentSeries out(0, cutoff);
    for (int m = 0; m <= cutoff; ++m) out.set(m, b[static_cast<size_t>(m)]);
    return out;
}

// exp of a two-sided series, restricted to [out_lo, out_hi]. Any constant
// term contributes a scalar factor exp(a_0). Internal one-sided cutoffs grow
// until trailing coefficients fall below 1e-16 x (max magnitude), so the
// window coefficients carry the full two-sided convolution up to that tail.
inline LaurentSeries full_exp(const LaurentSeries& a, int out_lo, int out_hi) {
    if (out_lo > out_hi) throw std::invalid_argument("full_exp: window hi < lo");
    LaurentSeries apos(1, std::max(1, a.hi())), aneg(std::min(-1, a.lo), -1);
    for (int k = std::max(1, a.lo); k <= a.hi(); ++k) apos.set(k, a.at(k));
    for (int k = a.lo; k <= std::min(-1, a.hi()); ++k) aneg.set(k, a.at(k));
    const cplx scale = std::exp(a.at(0));

    constexpr double kTailTol = 1e-16;
    constexpr int kCutoffCap = 16384;
    int w = std::max({std::abs(out_lo), std::abs(out_hi), 8}) + 8;
    std::vector<cplx> A, B;
    for (;;) {
        A = detail::exp_pos_side(apos, w);
        B = detail::exp_pos_side(detail::mirror(aneg), w);
        double maxmag = 0.0, tail = 0.0;
        for (const auto& x : A) maxmag = std::max(maxmag, std::abs(x));
        for (const auto& x : B) maxmag = std::max(maxmag, std::abs(x));
        if (!std::isfinite(maxmag))
            throw std::runtime_error("full_exp: coefficient overflow (symbol outside its domain?)");
        for (int t = 0; t < 3 && t <= w; ++t) {
            tail = std::max({tail, std::abs(A[static_cast<size_t>(w - t)]),
                             std::abs(B[static_cast<size_t>(w - t)])});
        }
        if (tail <= kTailTol * maxmag) break;
        if (w >= kCutoffCap)
            throw std::runtime_error("full_exp: coefficients do not decay within cutoff cap");
        w = std::min(kCutoffCap, 2 * w);
    }

    LaurentSeries out(out_lo, out_hi);
    for (int k = out_lo; k <= out_hi; ++k) {
        cplx s{};
        for (int m = std::max(0, -k); m <= w; ++m) {
            const int p = k + m;
            if (p > w) break;
            s += A[static_cast<size_t>(p)] * B[static_cast<size_t>(m)];
        }
        out.set(k, scale * s);
    }
    return out;
}

// log(1 + u) for a two-sided series u; intended for small-norm u
// (perturbation construction). Alternating power series; intermediate powers
// live on a window padded beyond [out_lo, out_hi] so truncation does not
// pollute the requested coefficients.
inline LaurentSeries laurent_log1p(const LaurentSeries& u, int out_lo, int out_hi,
                                   int max_terms = 64) {
    if (out_lo > out_hi) throw std::invalid_argument("laurent_log1p: window hi < lo");
    const int pad = std::max(32, static_cast<int>(u.c.size()));
    const int wlo = std::min(out_lo, u.lo) - pad, whi = std::max(out_hi, u.hi()) + pad;
    LaurentSeries sum(wlo, whi), pw(wlo, whi);
    for (int k = u.lo; k <= u.hi(); ++k) pw.set(k, u.at(k));
    double prev_mag = std::numeric_limits<double>::infinity();
    for (int t = 1; t <= max_terms; ++t) {
        const double mag = pw.max_abs();
        if (mag < 1e-18) break;
        if (t > 4 && mag > prev_mag)
            throw std::runtime_error("laurent_log1p: series not contracting (|u| too large)");
        prev_mag = mag;
        const double sign = (t % 2 == 1) ? 1.0 : -1.0;
        for (int k = wlo; k <= whi; ++k) sum.ref(k) += sign / double(t) * pw.at(k);
        if (t < max_terms) pw = laurent_mul(pw, u, wlo, whi);
    }
    LaurentSeries out(out_lo, out_hi);
    for (int k = out_lo; k <= out_hi; ++k) out.set(k, sum.at(k));
    return out;
}

struct QuadratureFailure : std::runtime_error {
    double radius;
    explicit QuadratureFailure(double radius_)
        : std::runtime_error("quadrature failure: integrand overflow on circle of radius " +
                             std::to_string(radius_)),
          radius(radius_) {}
};

namespace detail {

// In-place iterative radix-2 FFT; forward transform uses exp(-2*pi*i*t*a/N).
inline void fft_inplace(std::vector<cplx>& v, bool inverse = false) {
    const size_t n = v.size();
    if (n == 0 || (n & (n - 1)) != 0) throw std::invalid_argument("fft: size not a power of two");
    for (size_t i = 1, j = 0; i < n; ++i) {
        size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(v[i], v[j]);
    }
    const double pi = std::acos(-1.0);
    for (size_t len = 2; len <= n; len <<= 1) {
        const double ang = 2.0 * pi / double(len) * (inverse ? 1.0 : -1.0);
        const cplx wl = std::polar(1.0, ang);
        for (size_t i = 0; i < n; i += len) {
            cplx w = 1.0;
            for (size_t j = 0; j < len / 2; ++j) {
                const cplx x = v[i + j], y = v[i + j + len / 2] * w;
                v[i + j] = x + y;
                v[i + j + len / 2] = x - y;
                w *= wl;
            }
        }
    }
    if (inverse)
        for (auto& x : v) x /= double(n);
}

} // namespace detail

// Smallest power of two >= max(64, 4*width).
inline int quadrature_grid_size(int width) {
    int n = 64;
    while (n < 4 * width) n *= 2;
    return n;
}

// Coefficients c_k = (1/2*pi*i) \oint f(z) z^{-k-1} dz for k in [k_lo, k_hi],
// by the N-point uniform trapezoid rule on |z| = radius (exact for
// band-limited integrands up to aliasing); bin values are rescaled by
// radius^{-k}.
inline LaurentSeries coeff_extract_quadrature(const std::function<cplx(cplx)>& f,
                                              double radius, int k_lo, int k_hi, int N) {
    if (radius <= 0.0) throw std::invalid_argument("coeff_extract_quadrature: radius <= 0");
    if (k_hi < k_lo) throw std::invalid_argument("coeff_extract_quadrature: empty k range");
    const int width = k_hi - k_lo + 1;
    if (N <= 0 || (N & (N - 1)) != 0)
        throw std::invalid_argument("coeff_extract_quadrature: N must be a power of two");
    if (N < 4 * width)
        throw std::invalid_argument("coeff_extract_quadrature: N < 4 x (width of k range)");

    const double pi = std::acos(-1.0);
    std::vector<cplx> vals(static_cast<size_t>(N));
    for (int a = 0; a < N; ++a) {
        const cplx z = std::polar(radius, 2.0 * pi * double(a) / double(N));
        const cplx fz = f(z);
        if (!std::isfinite(fz.real()) || !std::isfinite(fz.imag())) throw QuadratureFailure(radius);
        vals[static_cast<size_t>(a)] = fz;
    }
    detail::fft_inplace(vals, /*inverse=*/false);

    LaurentSeries out(k_lo, k_hi);
    for (int k = k_lo; k <= k_hi; ++k) {
        const int bin = ((k % N) + N) % N;
        out.set(k, vals[static_cast<size_t>(bin)] / double(N) * std::pow(radius, -k));
    }
    return out;
}

} // namespace toefred

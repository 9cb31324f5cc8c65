#pragma once

// The operator kernel attached to a symbol exp(V), built two independent
// ways: from the coefficient series of exp(+-V') (V' the reflected exponent),
//   K(i,j) = sum_{l>=1} E_{i+l} F_{-(j+l)},
// and by double contour quadrature on circles |zeta| = rho, |eta| = 1/rho
// with 1 < rho < r:
//   K(i,j) = (1/N^2) sum_{a,b} e^{V'(zeta_a) - V'(eta_b)}
//            zeta_a^{-i} eta_b^{j+1} / (zeta_a - eta_b).
// Both decay like C rho^{-(i+j)}.

#include <functional>
#include <map>
#include <memory>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <toefred/symbol.hpp>

namespace toefred {

// E = coefficients of exp(V'), F = coefficients of exp(-V'), on [-cutoff, cutoff].
inline std::pair<LaurentSeries, LaurentSeries> ef_coeffs(const SymbolSpec& s, int cutoff) {
    if (cutoff < 1) throw std::invalid_argument("ef_coeffs: cutoff must be >= 1");
    auto st = star(s);
    return {phi_coeffs(st, -cutoff, cutoff), phi_coeffs(negate(st), -cutoff, cutoff)};
}

// Largest safe quadrature radius: 2 for entire symbols, else sqrt(r), shrunk
// toward 1 until |exp(+-V')| stays below 1e100 on both circles rho and 1/rho.
inline double rho_default(const SymbolSpec& s) {
    validate(s);
    const SymbolSpec st = star(s);
    const double pi = std::acos(-1.0);
    double rho = s.entire() ? 2.0 : std::sqrt(s.r);
    for (int guard = 0; guard < 60; ++guard) {
        double worst = 0.0;
        for (double radius : {rho, 1.0 / rho})
            for (int a = 0; a < 64; ++a) {
                const cplx z = std::polar(radius, 2.0 * pi * double(a) / 64.0);
                worst = std::max(worst, std::abs(eval_v(st, z).real()));
            }
        if (worst <= 230.0) return rho; // e^230 < 1e100
        rho = 1.0 + 0.5 * (rho - 1.0);
    }
    throw std::runtime_error("rho_default: exponent blows up arbitrarily close to the unit circle");
}

// Series route. Entries are memoized so repeated evaluation is bitwise
// reproducible even after the internal E/F window grows.
class SeriesKernel {
  public:
    explicit SeriesKernel(const SymbolSpec& s, int cutoff = 32)
        : star_(star(s)), cutoff0_(cutoff) {
        validate(s);
        if (cutoff < 1) throw std::invalid_argument("SeriesKernel: cutoff must be >= 1");
        grow(cutoff);
    }

    cplx operator()(int i, int j) const {
        if (i < 0 || j < 0)
            throw std::invalid_argument("kernel: indices must be nonnegative");
        if (auto it = cache_.find({i, j}); it != cache_.end()) return it->second;
        cplx sum{};
        const int l_max = 10 * cutoff0_;
        for (int l = 1; l <= l_max; ++l) {
            const int need = std::max(i, j) + l;
            if (need > w_) grow(need);
            const cplx term = E_.at(i + l) * F_.at(-(j + l));
            sum += term;
            if (std::abs(term) < 1e-17 * (std::abs(sum) + 1e-300)) {
                cache_.emplace(std::pair{i, j}, sum);
                return sum;
            }
        }
        throw std::runtime_error(
            "kernel series did not converge: terms still significant after l = " +
            std::to_string(l_max) + " (symbol outside its stated annulus?)");
    }

  private:
    void grow(int need) const {
        w_ = std::max(need, 2 * w_);
        E_ = phi_coeffs(star_, -w_, w_);
        F_ = phi_coeffs(negate(star_), -w_, w_);
    }

    SymbolSpec star_;
    int cutoff0_;
    mutable int w_ = 0;
    mutable LaurentSeries E_, F_;
    mutable std::map<std::pair<int, int>, cplx> cache_;
};

// Quadrature route. Sample values and the Cauchy factor 1/(zeta_a - eta_b)
// are fixed at construction; a block evaluation factorizes through them, so
// an M x M block costs O(M N^2 + M^2 N) instead of O(M^2 N^2).
class QuadratureKernel {
  public:
    explicit QuadratureKernel(const SymbolSpec& s, double rho = 0.0, int N = 256)
        : rho_(rho == 0.0 ? rho_default(s) : rho), N_(N) {
        validate(s);
        if (!(rho_ > 1.0) || !(rho_ < s.r))
            throw std::invalid_argument("QuadratureKernel: need 1 < rho < r (rho = " +
                                        std::to_string(rho_) + ", r = " + std::to_string(s.r) + ")");
        if (N_ < 8) throw std::invalid_argument("QuadratureKernel: N must be >= 8");
        const SymbolSpec st = star(s);
        const double pi = std::acos(-1.0);
        zeta_.resize(N_), eta_.resize(N_), ez_.resize(N_), eh_.resize(N_);
        for (int a = 0; a < N_; ++a) {
            const double ang = 2.0 * pi * double(a) / double(N_);
            zeta_[a] = std::polar(rho_, ang);
            eta_[a] = std::polar(1.0 / rho_, ang);
            ez_[a] = std::exp(eval_v(st, zeta_[a]));
            eh_[a] = std::exp(-eval_v(st, eta_[a]));
            for (cplx v : {ez_[a], eh_[a]})
                if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
                    throw QuadratureFailure(rho_);
        }
        inv_diff_.resize(N_, N_);
        for (int a = 0; a < N_; ++a)
            for (int b = 0; b < N_; ++b) inv_diff_(a, b) = 1.0 / (zeta_[a] - eta_[b]);
    }

    double rho() const { return rho_; }

    cplx operator()(int i, int j) const { return block(0, i, j); }

    // Matrix of K(n+a, n+b), 0 <= a,b < M.
    Eigen::MatrixXcd block(int n, int M) const {
        if (M < 0) throw std::invalid_argument("block: M must be >= 0");
        Eigen::MatrixXcd K(M, M);
        if (M == 0) return K;
        Eigen::MatrixXcd A(M, N_), B(N_, M);
        for (int p = 0; p < M; ++p)
            for (int a = 0; a < N_; ++a) {
                A(p, a) = ez_[a] * std::pow(zeta_[a], -(n + p));
                B(a, p) = eh_[a] * std::pow(eta_[a], n + p + 1);
            }
        K = (A * inv_diff_ * B) / (double(N_) * double(N_));
        return K;
    }

  private:
    cplx block(int, int i, int j) const {
        if (i < 0 || j < 0)
            throw std::invalid_argument("kernel: indices must be nonnegative");
        cplx acc{};
        for (int b = 0; b < N_; ++b) {
            cplx s{};
            for (int a = 0; a < N_; ++a)
                s += ez_[a] * std::pow(zeta_[a], -i) * inv_diff_(a, b);
            acc += s * eh_[b] * std::pow(eta_[b], j + 1);
        }
        return acc / (double(N_) * double(N_));
    }

    double rho_;
    int N_;
    std::vector<cplx> zeta_, eta_, ez_, eh_;
    Eigen::MatrixXcd inv_diff_;
};

enum class KernelMethod { series, quadrature, closed_form };

inline const char* method_name(KernelMethod m) {
    switch (m) {
        case KernelMethod::series: return "series";
        case KernelMethod::quadrature: return "quadrature";
        default: return "closed-form";
    }
}

// |K(i,j)| <= C rho^{-(i+j)}.
struct DecayBound {
    double C;
    double rho;
};

// C fitted as the max of |K(i,j)| rho^{i+j} over a 10x10 block.
template <class Eval>
DecayBound fit_decay(const Eval& eval, double rho) {
    double C = 1e-300;
    for (int i = 0; i < 10; ++i)
        for (int j = 0; j < 10; ++j)
            C = std::max(C, std::abs(eval(i, j)) * std::pow(rho, i + j));
    return {C, rho};
}

// Checks |K(i,j)| <= C rho^{-(i+j)} on an M x M block (tiny slack for roundoff).
template <class Eval>
bool verify_decay(const Eval& eval, const DecayBound& bound, int M = 20) {
    for (int i = 0; i < M; ++i)
        for (int j = 0; j < M; ++j)
            if (std::abs(eval(i, j)) * std::pow(bound.rho, i + j) > bound.C * (1.0 + 1e-9))
                return false;
    return true;
}

// A kernel with its provenance, decay certificate, and an optional fast
// block path (entrywise fill otherwise).
struct KernelSource {
    std::function<cplx(int, int)> eval;
    std::function<Eigen::MatrixXcd(int, int)> block; // may be empty
    DecayBound decay{1e-300, 2.0};
    KernelMethod method = KernelMethod::series;
};

inline Eigen::MatrixXcd kernel_block(const KernelSource& src, int n, int M) {
    if (M < 0) throw std::invalid_argument("kernel_block: M must be >= 0");
    if (M == 0) return Eigen::MatrixXcd(0, 0);
    if (src.block) return src.block(n, M);
    Eigen::MatrixXcd K(M, M);
    for (int a = 0; a < M; ++a)
        for (int b = 0; b < M; ++b) K(a, b) = src.eval(n + a, n + b);
    return K;
}

inline KernelSource make_series_source(const SymbolSpec& s) {
    auto k = std::make_shared<SeriesKernel>(s);
    KernelSource src;
    src.eval = [k](int i, int j) { return (*k)(i, j); };
    src.method = KernelMethod::series;
    src.decay = fit_decay(src.eval, rho_default(s));
    return src;
}

inline KernelSource make_quadrature_source(const SymbolSpec& s, double rho = 0.0, int N = 256) {
    auto k = std::make_shared<QuadratureKernel>(s, rho, N);
    KernelSource src;
    src.eval = [k](int i, int j) { return (*k)(i, j); };
    src.block = [k](int n, int M) { return k->block(n, M); };
    src.method = KernelMethod::quadrature;
    src.decay = fit_decay(src.eval, k->rho());
    return src;
}

} // namespace toefred

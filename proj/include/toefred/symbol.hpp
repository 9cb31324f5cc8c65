#pragma once

// Symbols of the form phi(z) = exp(V(z)), V(z) = sum_{k>=1} vplus_k z^k +
// sum_{k>=1} vminus_k z^{-k}: the reflected exponent V', the coefficients
// phi_k, the constant Z = exp(sum k vplus_k vminus_k), preset families,
// JSON (de)serialization, and a high-mode perturbation that edits phi_{+-m}
// without touching any other phi_k.

#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>

#include <json.hpp>
#include <toefred/series.hpp>

namespace toefred {

constexpr double kEntire = std::numeric_limits<double>::infinity();

// Exponent data: finite coefficient maps (keys >= 1) and the radius r > 1 of
// the annulus 1/r < |z| < r on which V is analytic (kEntire for Laurent
// polynomials).
struct SymbolSpec {
    std::map<int, cplx> vplus, vminus;
    double r = kEntire;

    bool entire() const { return std::isinf(r); }
    friend bool operator==(const SymbolSpec&, const SymbolSpec&) = default;
};

inline void validate(const SymbolSpec& s) {
    for (const auto* m : {&s.vplus, &s.vminus})
        for (const auto& [k, v] : *m) {
            (void)v;
            if (k < 1) throw std::invalid_argument("symbol: coefficient index must be >= 1");
        }
    if (!(s.r > 1.0)) throw std::invalid_argument("symbol: annulus radius must exceed 1");
}

// Reflection V'(z) = V^-(-z) - V^+(-z): coefficient of z^{+k} is
// (-1)^{k+1} vplus_k, of z^{-k} is (-1)^k vminus_k. Self-inverse.
inline SymbolSpec star(const SymbolSpec& s) {
    SymbolSpec out;
    out.r = s.r;
    for (const auto& [k, v] : s.vplus) out.vplus[k] = (k % 2 == 1 ? v : -v);
    for (const auto& [k, v] : s.vminus) out.vminus[k] = (k % 2 == 0 ? v : -v);
    return out;
}

inline SymbolSpec negate(const SymbolSpec& s) {
    SymbolSpec out;
    out.r = s.r;
    for (const auto& [k, v] : s.vplus) out.vplus[k] = -v;
    for (const auto& [k, v] : s.vminus) out.vminus[k] = -v;
    return out;
}

inline LaurentSeries v_series(const SymbolSpec& s) {
    int kmax = 1;
    if (!s.vplus.empty()) kmax = std::max(kmax, s.vplus.rbegin()->first);
    if (!s.vminus.empty()) kmax = std::max(kmax, s.vminus.rbegin()->first);
    LaurentSeries v(-kmax, kmax);
    for (const auto& [k, val] : s.vplus) v.set(k, val);
    for (const auto& [k, val] : s.vminus) v.set(-k, val);
    return v;
}

inline cplx eval_v(const SymbolSpec& s, cplx z) {
    cplx acc{};
    for (const auto& [k, val] : s.vplus) acc += val * std::pow(z, k);
    for (const auto& [k, val] : s.vminus) acc += val * std::pow(z, -k);
    return acc;
}

// phi_k = [z^k] exp(V(z)) on [lo, hi].
inline LaurentSeries phi_coeffs(const SymbolSpec& s, int lo, int hi) {
    return full_exp(v_series(s), lo, hi);
}

// Z = exp(sum_{k>=1} k vplus_k vminus_k), a finite sum over shared indices.
inline cplx szego_constant(const SymbolSpec& s) {
    cplx acc{};
    for (const auto& [k, vp] : s.vplus) {
        auto it = s.vminus.find(k);
        if (it != s.vminus.end()) acc += double(k) * vp * it->second;
    }
    return std::exp(acc);
}

// --- Preset families ------------------------------------------------------

// exp(theta (z + 1/z)).
inline SymbolSpec preset_bessel(cplx theta) {
    if (theta == cplx{})
        throw std::invalid_argument("preset bessel: requires theta != 0");
    SymbolSpec s;
    s.vplus[1] = theta;
    s.vminus[1] = theta;
    s.r = kEntire;
    return s;
}

namespace detail {

// Coefficients of a log(1 + x z^{+-1}) dropped below 1e-18: a (-1)^{k+1} x^k / k.
inline void log_series_coeffs(std::map<int, cplx>& dst, cplx a, cplx x) {
    cplx xk = 1.0;
    for (int k = 1; k <= 1000000; ++k) {
        xk *= x;
        const cplx v = a * (k % 2 == 1 ? xk : -xk) / double(k);
        if (std::abs(v) < 1e-18) break;
        dst[k] = v;
    }
}

} // namespace detail

// (1 + theta z)^kappa exp(theta / z); requires |theta| < 1.
inline SymbolSpec preset_charlier(cplx kappa, cplx theta) {
    if (!(std::abs(theta) < 1.0))
        throw std::invalid_argument("preset charlier: requires |theta| < 1");
    SymbolSpec s;
    detail::log_series_coeffs(s.vplus, kappa, theta);
    s.vminus[1] = theta;
    s.r = theta == cplx{} ? kEntire : 1.0 / std::abs(theta);
    return s;
}

// (1 + xi z)^z1 (1 + xi / z)^z2; requires |xi| < 1.
inline SymbolSpec preset_hypergeometric(cplx z1, cplx z2, cplx xi) {
    if (!(std::abs(xi) < 1.0))
        throw std::invalid_argument("preset hypergeometric: requires |xi| < 1");
    SymbolSpec s;
    detail::log_series_coeffs(s.vplus, z1, xi);
    detail::log_series_coeffs(s.vminus, z2, xi);
    s.r = xi == cplx{} ? kEntire : 1.0 / std::abs(xi);
    return s;
}

// --- JSON serialization ----------------------------------------------------
// Explicit form: {"vplus": [[k, re, im], ...], "vminus": [...], "r": number|"entire"}
// Preset shorthand: {"preset": "bessel", "theta": 1.0}; complex parameters may
// be written as [re, im].

namespace detail {

inline cplx json_to_cplx(const nlohmann::json& j, const char* what) {
    if (j.is_number()) return cplx{j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return cplx{j[0].get<double>(), j[1].get<double>()};
    throw std::invalid_argument(std::string("symbol json: ") + what +
                                " must be a number or [re, im]");
}

inline std::map<int, cplx> json_to_vmap(const nlohmann::json& j, const char* what) {
    std::map<int, cplx> out;
    if (!j.is_array())
        throw std::invalid_argument(std::string("symbol json: ") + what +
                                    " must be an array of [k, re, im]");
    for (const auto& e : j) {
        if (!e.is_array() || e.size() != 3)
            throw std::invalid_argument(std::string("symbol json: ") + what +
                                        " entries must be [k, re, im]");
        out[e[0].get<int>()] = cplx{e[1].get<double>(), e[2].get<double>()};
    }
    return out;
}

} // namespace detail

inline nlohmann::json symbol_to_json(const SymbolSpec& s) {
    nlohmann::json j;
    j["vplus"] = nlohmann::json::array();
    j["vminus"] = nlohmann::json::array();
    for (const auto& [k, v] : s.vplus) j["vplus"].push_back({k, v.real(), v.imag()});
    for (const auto& [k, v] : s.vminus) j["vminus"].push_back({k, v.real(), v.imag()});
    if (s.entire())
        j["r"] = "entire";
    else
        j["r"] = s.r;
    return j;
}

inline SymbolSpec symbol_from_json(const nlohmann::json& j) {
    if (j.contains("preset")) {
        const std::string name = j.at("preset").get<std::string>();
        if (name == "bessel")
            return preset_bessel(detail::json_to_cplx(j.at("theta"), "theta"));
        if (name == "charlier")
            return preset_charlier(detail::json_to_cplx(j.at("kappa"), "kappa"),
                                   detail::json_to_cplx(j.at("theta"), "theta"));
        if (name == "hypergeometric")
            return preset_hypergeometric(detail::json_to_cplx(j.at("z"), "z"),
                                         detail::json_to_cplx(j.at("zprime"), "zprime"),
                                         detail::json_to_cplx(j.at("xi"), "xi"));
        throw std::invalid_argument("symbol json: unknown preset '" + name + "'");
    }
    SymbolSpec s;
    s.vplus = detail::json_to_vmap(j.at("vplus"), "vplus");
    s.vminus = detail::json_to_vmap(j.at("vminus"), "vminus");
    if (j.contains("r")) {
        if (j.at("r").is_string()) {
            if (j.at("r").get<std::string>() != "entire")
                throw std::invalid_argument("symbol json: r must be a number or \"entire\"");
            s.r = kEntire;
        } else {
            s.r = j.at("r").get<double>();
        }
    }
    validate(s);
    return s;
}

// --- High-mode perturbation -------------------------------------------------
// Returns the exponent of phi(z) + eps z^m + delta z^{-m}, with delta chosen
// (Newton) so the perturbed exponent keeps a zero constant term. Every phi_k
// with |k| != m is preserved exactly; the exponent coefficients all move.

struct PerturbedSymbol {
    SymbolSpec spec;
    cplx delta;
};

inline PerturbedSymbol perturb_high_modes(const SymbolSpec& s, int m, cplx eps) {
    validate(s);
    if (m < 1 || m > 48)
        throw std::invalid_argument("perturb_high_modes: m must be in [1, 48]");
    constexpr int N = 1024, W = 64;
    const double pi = std::acos(-1.0);

    // Newton for delta: g(delta) = [z^0] log(1 + h/phi) on |z| = 1 must vanish;
    // g'(delta) = [z^0] z^{-m}/(phi + h).
    cplx delta{};
    double residual = std::numeric_limits<double>::infinity();
    for (int iter = 0; iter < 50; ++iter) {
        cplx g{}, gp{};
        for (int a = 0; a < N; ++a) {
            const cplx z = std::polar(1.0, 2.0 * pi * double(a) / double(N));
            const cplx phi = std::exp(eval_v(s, z));
            const cplx h = eps * std::pow(z, m) + delta * std::pow(z, -m);
            g += std::log(1.0 + h / phi);
            gp += std::pow(z, -m) / (phi + h);
        }
        g /= double(N), gp /= double(N);
        residual = std::abs(g);
        if (residual < 1e-15) break;
        delta -= g / gp;
    }
    if (!(residual < 1e-13))
        throw std::runtime_error("perturb_high_modes: normalization did not converge");

    auto log_correction = [&](cplx z) {
        const cplx phi = std::exp(eval_v(s, z));
        const cplx h = eps * std::pow(z, m) + delta * std::pow(z, -m);
        return std::log(1.0 + h / phi);
    };
    auto corr = coeff_extract_quadrature(log_correction, 1.0, -W, W, N);

    SymbolSpec out = s;
    for (int k = 1; k <= W; ++k) {
        for (auto [key, c] : {std::pair{k, corr.at(k)}, std::pair{-k, corr.at(-k)}}) {
            auto& dst = key > 0 ? out.vplus : out.vminus;
            const int idx = std::abs(key);
            const cplx v = dst.count(idx) ? dst[idx] + c : c;
            if (std::abs(v) < 1e-18)
                dst.erase(idx);
            else
                dst[idx] = v;
        }
    }

    // Largest annulus on which |h/phi| stays below 1/2 (checked on the two
    // boundary circles; the maximum principle covers the interior), so the
    // perturbed exponent is analytic there.
    const double rho_cap = std::min(s.entire() ? 4.0 : s.r, 4.0);
    double rho_ok = 0.0;
    for (double t = 1.0; t > 1e-3; t *= 0.5) {
        const double rho = 1.0 + (rho_cap - 1.0) * t;
        double worst = 0.0;
        for (double radius : {rho, 1.0 / rho}) {
            for (int a = 0; a < 64; ++a) {
                const cplx z = std::polar(radius, 2.0 * pi * double(a) / 64.0);
                const cplx h = eps * std::pow(z, m) + delta * std::pow(z, -m);
                worst = std::max(worst, std::abs(h / std::exp(eval_v(s, z))));
            }
        }
        if (worst < 0.5) {
            rho_ok = rho;
            break;
        }
    }
    if (rho_ok <= 1.0)
        throw std::runtime_error("perturb_high_modes: perturbation too large for any annulus");
    out.r = rho_ok;
    return {std::move(out), delta};
}

} // namespace toefred

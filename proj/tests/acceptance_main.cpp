// Acceptance gate: ten criteria, one PASS/FAIL line each, exit 0 iff all
// pass. Tolerances and parameter grids are pinned here on purpose — they are
// the contract, not knobs. Each criterion is independent; a throw inside one
// is reported as its failure and the remaining criteria still run.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include <Eigen/SVD>

#include <toefred/exact.hpp>
#include <toefred/fredholm.hpp>
#include <toefred/kernel.hpp>
#include <toefred/special_kernels.hpp>
#include <toefred/symbol.hpp>
#include <toefred/toeplitz.hpp>

using namespace toefred;

namespace {

using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point t0) {
    return std::chrono::duration<double>(clock_type::now() - t0).count();
}

std::string fg(double x) {
    char b[48];
    std::snprintf(b, sizeof b, "%.3g", x);
    return b;
}

std::string fs(double x) {
    char b[48];
    std::snprintf(b, sizeof b, "%.2f", x);
    return b;
}

struct Outcome {
    bool ok = false;
    std::string detail;
};

// ------------------------------------------------------------------ 1 ------
// Exact identity D_n == Z * det(1-K) in the truncated algebra, zero
// difference, over the full (n, d) grid, within the time budget.
Outcome criterion1() {
    const auto t0 = clock_type::now();
    std::string bad;
    for (int n = 1; n <= 5; ++n)
        for (int d : {2, 4, 6, 8})
            if (!gp_is_zero(exact_verify(n, d)))
                bad += " (n=" + std::to_string(n) + ",d=" + std::to_string(d) + ")";
    const double dt = seconds_since(t0);
    const bool ok = bad.empty() && dt < 60.0;
    return {ok, "exact identity D_n == Z*det(1-K): zero difference for n in {1..5}, d in {2,4,6,8}" +
                    (bad.empty() ? std::string() : " EXCEPT" + bad) + "; " + fs(dt) + " s (budget 60 s)"};
}

// ------------------------------------------------------------------ 2 ------
// Exact column-bounded Schur-sum identity, zero difference.
Outcome criterion2() {
    std::string bad;
    for (int n = 1; n <= 4; ++n)
        for (int d : {2, 4, 6, 8})
            if (!gp_is_zero(gessel_check(n, d)))
                bad += " (n=" + std::to_string(n) + ",d=" + std::to_string(d) + ")";
    return {bad.empty(),
            "exact Schur-sum identity: column-bounded Schur sum == Toeplitz determinant for n in "
            "{1..4}, d in {2,4,6,8}" +
                (bad.empty() ? std::string(" (zero difference)") : " EXCEPT" + bad)};
}

// ------------------------------------------------------------------ 3 ------
// Exact correlation identity for every X in {-2..3} with |X| <= 2, d = 6.
Outcome criterion3() {
    std::vector<std::vector<int>> sets;
    sets.push_back({});
    for (int a = -2; a <= 3; ++a) sets.push_back({a});
    for (int a = -2; a <= 3; ++a)
        for (int b = a + 1; b <= 3; ++b) sets.push_back({a, b});
    std::string bad;
    for (const auto& X : sets)
        if (!gp_is_zero(correlation_check(X, 6))) {
            bad += " {";
            for (std::size_t k = 0; k < X.size(); ++k) bad += (k ? "," : "") + std::to_string(X[k]);
            bad += "}";
        }
    return {bad.empty(), "exact correlation identity: minor determinants == Schur-weighted "
                         "correlation sums for all " +
                             std::to_string(sets.size()) +
                             " sets X in {-2..3}, |X| <= 2, d=6" +
                             (bad.empty() ? std::string(" (zero difference)") : "; FAILED at" + bad)};
}

struct PresetCase {
    const char* name;
    SymbolSpec spec;
};

std::vector<PresetCase> acceptance_presets() {
    return {{"bessel(1)", preset_bessel(1.0)},
            {"charlier(2,0.5)", preset_charlier(2.0, 0.5)},
            {"hypergeometric(2,3,0.4)", preset_hypergeometric(2.0, 3.0, 0.4)}};
}

// ------------------------------------------------------------------ 4 ------
// Numeric identity with the generic series kernel, rel err <= 1e-9, n=1..10.
Outcome criterion4() {
    const auto t0 = clock_type::now();
    double worst = 0.0;
    std::string bad;
    for (const auto& pc : acceptance_presets()) {
        const auto phi = phi_coeffs(pc.spec, -10, 10);
        const cplx z = szego_constant(pc.spec);
        const auto src = make_series_source(pc.spec);
        for (int n = 1; n <= 10; ++n) {
            const cplx lhs = toeplitz_det(phi, n).value;
            const auto fr = det_truncated(src, n, 1e-10);
            const double rel = std::abs(lhs - z * fr.value) / std::abs(lhs);
            worst = std::max(worst, rel);
            if (!fr.converged || rel > 1e-9)
                bad += std::string(" ") + pc.name + "@n=" + std::to_string(n);
        }
    }
    const double dt = seconds_since(t0);
    const bool ok = bad.empty() && dt < 10.0;
    return {ok, "numeric identity (series kernel): |D_n - Z*det(1-K)|/|D_n| <= 1e-9 for three "
                "presets, n=1..10 (worst " +
                    fg(worst) + (bad.empty() ? "" : "; FAILED at" + bad) + "); " + fs(dt) +
                    " s (budget 10 s)"};
}

// ------------------------------------------------------------------ 5 ------
// Z closed forms to <= 1e-14 relative.
Outcome criterion5() {
    const double e1 = std::exp(1.0), e05 = std::exp(0.5);
    const double hy = std::pow(1.0 - 0.16, -6.0);
    const struct {
        const char* name;
        cplx got;
        double want;
    } cases[] = {{"exp(theta^2)", szego_constant(preset_bessel(1.0)), e1},
                 {"exp(kappa*theta^2)", szego_constant(preset_charlier(2.0, 0.5)), e05},
                 {"(1-xi^2)^(-z*z')", szego_constant(preset_hypergeometric(2.0, 3.0, 0.4)), hy}};
    double worst = 0.0;
    for (const auto& c : cases) worst = std::max(worst, std::abs(c.got - c.want) / c.want);
    return {worst <= 1e-14, "Szego constant matches closed forms exp(theta^2), exp(kappa*theta^2), "
                            "(1-xi^2)^(-z*z') to <= 1e-14 relative (worst " +
                                fg(worst) + ")"};
}

// ------------------------------------------------------------------ 6 ------
// Kernel cross-validation: series vs quadrature vs closed form on i,j <= 20
// over the pinned parameter grids, max absolute deviation <= 1e-10; the
// ambiguous-index reading in the Gauss-hypergeometric closed form is
// adjudicated against the series kernel and reported.
Outcome criterion6() {
    struct Config {
        std::string name;
        SymbolSpec spec;
        KernelSource closed;
    };
    std::vector<Config> configs;
    for (double th : {0.3, 1.0, 2.0})
        configs.push_back({"bessel(" + fg(th) + ")", preset_bessel(th), make_bessel_source(th)});
    for (double ka : {0.7, 2.0, 3.5})
        for (double th : {0.2, 0.6})
            configs.push_back({"charlier(" + fg(ka) + "," + fg(th) + ")",
                               preset_charlier(ka, th), make_charlier_source(ka, th)});
    const std::vector<cplx> zs = {cplx(0.8, 0.0), cplx(2.0, 0.0), cplx(1.0, 1.0)};
    double adj_res = 0.0, adj_gap = std::numeric_limits<double>::infinity();
    bool adj_consistent = true;
    int n_hyper = 0;
    for (cplx z : zs)
        for (cplx zp : zs)
            for (double xi : {0.2, 0.5}) {
                auto [src, adj] = make_hypergeom_source(z, zp, xi);
                adj_consistent = adj_consistent && adj.chosen == IndexReading::denom_i_plus_1;
                adj_res = std::max(adj_res, adj.err_chosen);
                adj_gap = std::min(adj_gap, adj.err_rejected);
                ++n_hyper;
                configs.push_back({"hypergeometric", preset_hypergeometric(z, zp, xi), src});
            }

    constexpr int B = 21; // indices 0..20
    double worst = 0.0;
    std::string bad;
    for (const auto& c : configs) {
        const Eigen::MatrixXcd bs = kernel_block(make_series_source(c.spec), 0, B);
        const Eigen::MatrixXcd bq = kernel_block(make_quadrature_source(c.spec), 0, B);
        const Eigen::MatrixXcd bc = kernel_block(c.closed, 0, B);
        const double dev = std::max({(bs - bq).cwiseAbs().maxCoeff(),
                                     (bs - bc).cwiseAbs().maxCoeff(),
                                     (bq - bc).cwiseAbs().maxCoeff()});
        worst = std::max(worst, dev);
        if (dev > 1e-10) bad += " " + c.name;
    }
    const bool ok = bad.empty() && adj_consistent;
    return {ok, "kernel cross-validation: series vs quadrature vs closed form on i,j <= 20 across " +
                    std::to_string(configs.size()) + " parameter points, max abs deviation " +
                    fg(worst) + " (<= 1e-10)" + (bad.empty() ? "" : "; FAILED at" + bad) +
                    "; index-reading adjudication: denominator (i+1) chosen on all " +
                    std::to_string(n_hyper) + " hypergeometric points (residual <= " + fg(adj_res) +
                    ", rejected (i+2) reading off by >= " + fg(adj_gap) + ")"};
}

// ------------------------------------------------------------------ 7 ------
// Integrable structure: numerical rank of (i-j)*K(i,j) on 10x10 blocks <= 2.
Outcome criterion7() {
    const struct {
        const char* name;
        KernelSource src;
    } cases[] = {{"bessel", make_bessel_source(1.0)},
                 {"charlier", make_charlier_source(2.0, 0.5)},
                 {"hypergeometric", make_hypergeom_source(2.0, 3.0, 0.4).first}};
    double worst_ratio = 0.0;
    bool ok = true;
    for (const auto& c : cases) {
        Eigen::MatrixXcd w(10, 10);
        for (int i = 0; i < 10; ++i)
            for (int j = 0; j < 10; ++j) w(i, j) = double(i - j) * c.src.eval(i, j);
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(w);
        const auto& sv = svd.singularValues();
        const double ratio = sv(2) / sv(0);
        worst_ratio = std::max(worst_ratio, ratio);
        ok = ok && ratio <= 1e-10;
    }
    return {ok, "integrable structure: numerical rank of (i-j)*K(i,j) on 10x10 blocks <= 2 for all "
                "closed-form kernels (third singular value / leading <= 1e-10; worst " +
                    fg(worst_ratio) + ")"};
}

// ------------------------------------------------------------------ 8 ------
// Szego convergence: |D_n - Z| strictly decreasing for n >= 3 until the
// roundoff floor; in the exact module D_n == Z identically once n >= d/2.
Outcome criterion8() {
    bool ok = true;
    std::string note;
    for (const auto& pc : acceptance_presets()) {
        const cplx z = szego_constant(pc.spec);
        const auto phi = phi_coeffs(pc.spec, -14, 14);
        std::vector<double> gap(15, 0.0);
        for (int n = 1; n <= 14; ++n) gap[n] = std::abs(toeplitz_det(phi, n).value - z);
        const double floor_ = std::max(64.0 * std::numeric_limits<double>::epsilon(), 1e-14) *
                              std::abs(z);
        int checked_to = 2;
        bool mono = true;
        for (int n = 3; n <= 14; ++n) {
            if (gap[n - 1] <= floor_ || gap[n] <= floor_) break;
            mono = mono && gap[n] < gap[n - 1];
            checked_to = n;
        }
        ok = ok && mono && checked_to >= 6; // the scan must not be vacuous
        note += std::string(" ") + pc.name + ":n<=" + std::to_string(checked_to) +
                (mono ? "" : "(VIOLATED)");
    }
    std::string bad;
    for (int d : {2, 4, 6, 8})
        for (int n : {d / 2, d / 2 + 1})
            if (!gp_is_zero(gp_sub(exact_toeplitz_det(n, d), exact_szego_poly(d))))
                bad += " (n=" + std::to_string(n) + ",d=" + std::to_string(d) + ")";
    ok = ok && bad.empty();
    return {ok, "Szego convergence: |D_n - Z| strictly decreasing for n >= 3 above the roundoff "
                "floor (checked" +
                    note + "); exact D_n == Z for n >= d/2 at d in {2,4,6,8}" +
                    (bad.empty() ? std::string(" (zero difference)") : "; FAILED at" + bad)};
}

// ------------------------------------------------------------------ 9 ------
// Limit transitions toward the bessel kernel, entrywise on i,j <= 2, strictly
// decreasing error along k = 10, 100, 1000. The charlier comparison uses the
// dilation-normalized kernel k^{(j-i)/2} K(i,j), the conjugation that relates
// the balanced symbol to its natural (un-dilated) form; the hypergeometric
// family converges entrywise as-is.
Outcome criterion9() {
    const auto bess = make_bessel_source(1.0);
    Eigen::Matrix3cd ref;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) ref(i, j) = bess.eval(i, j);

    std::string note;
    bool ok = true;
    for (const bool charlier : {true, false}) {
        double prev = std::numeric_limits<double>::infinity();
        note += charlier ? " charlier:" : " hypergeometric:";
        for (int k : {10, 100, 1000}) {
            const KernelSource src =
                charlier ? make_charlier_source(double(k), 1.0 / std::sqrt(double(k)))
                         : make_hypergeom_source(double(k), double(k), 1.0 / double(k)).first;
            double err = 0.0;
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) {
                    const cplx v = charlier ? std::pow(double(k), 0.5 * double(j - i)) * src.eval(i, j)
                                            : src.eval(i, j);
                    err = std::max(err, std::abs(v - ref(i, j)));
                }
            ok = ok && err < prev;
            note += (k == 10 ? " " : " -> ") + fg(err);
            prev = err;
        }
    }
    return {ok, "limit transitions to bessel(1): dilation-normalized charlier(k, 1/sqrt(k)) and "
                "hypergeometric(k, k, 1/k) entrywise on i,j <= 2, error strictly decreasing over "
                "k in {10,100,1000} (" +
                    note + ")"};
}

// ------------------------------------------------------------------ 10 -----
// Locality. Exact side: adding (v_1^+)^n to the coefficient v_d^+ changes the
// symbol's Fourier data phi_k only for k >= n at truncation degree d (any
// effect on a lower mode carries degree > d), yet every kernel entry moves;
// both the order-n Toeplitz determinant and Z*det(1-K) on {n,...} must be
// unchanged as polynomials. Numeric side: a +/-m mode pair perturbation
// (m >= n), renormalized to keep the exponent admissible, moves Z and the
// kernel visibly while both sides of the identity stay put to <= 1e-11.
Outcome criterion10_exact_case(int n, int d) {
    using detail::two_sided_coeff;
    const auto T = detail::star_tables(d);

    GradedPoly pert = gp_const(1, d);
    for (int t = 0; t < n; ++t) pert = gp_mul(pert, gp_var(true, 1, d));
    const int sgn_star = (d % 2 == 0) ? -1 : +1; // sign of v_d^+ inside the twisted exponent

    // pw[u] = pert^u / u!; the factor exp(pert * zeta^d) truncates after u*n > d.
    std::vector<GradedPoly> pw{gp_const(1, d)};
    for (int u = 1; u * n <= d; ++u) pw.push_back(gp_scale(gp_mul(pw.back(), pert), Rational(1, u)));

    const auto shifted_sum = [&](int t, const std::vector<GradedPoly>& P,
                                 const std::vector<GradedPoly>& M, int flip_parity) {
        GradedPoly acc = gp_zero(d);
        for (int u = 0; u < static_cast<int>(pw.size()); ++u) {
            if (std::abs(t - u * d) > d) continue;
            GradedPoly term = gp_mul(pw[u], two_sided_coeff(t - u * d, P, M, d));
            if (flip_parity && u % 2) term = gp_neg(term);
            acc = gp_add(acc, term);
        }
        return acc;
    };
    const auto e_hat = [&](int t) { return shifted_sum(t, T.Pstar, T.Mstar, sgn_star < 0); };
    const auto f_hat = [&](int t) { return shifted_sum(t, T.Pneg, T.Mneg, sgn_star > 0); };

    // Perturbed phi_k; exp(V) gains the same factor exp(pert * zeta^d), signless.
    auto plus_one = [](int) { return 1; };
    const auto P1 = gp_exp_series(d, true, plus_one, d);
    const auto M1 = gp_exp_series(d, false, plus_one, d);
    const auto phi_hat = [&](int k) { return shifted_sum(k, P1, M1, 0); };
    const auto phi = [&](int k) { return two_sided_coeff(k, P1, M1, d); };

    // The low modes |k| < n must be untouched and at least one high mode must move.
    for (int k = -(n - 1); k <= n - 1; ++k)
        if (!gp_is_zero(gp_sub(phi_hat(k), phi(k)))) return {false, "low mode moved"};
    if (gp_is_zero(gp_sub(phi_hat(d), phi(d)))) return {false, "perturbation had no effect"};

    // Left side: order-n Toeplitz determinant from the perturbed phi.
    std::vector<std::vector<GradedPoly>> tm(n, std::vector<GradedPoly>(n, gp_zero(d)));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) tm[i][j] = phi_hat(i - j);
    if (!gp_is_zero(gp_sub(gp_det(tm, d), exact_toeplitz_det(n, d))))
        return {false, "Toeplitz side moved"};

    // Right side: Z*det(1-K) on {n, n+1, ...}. The perturbed kernel column j
    // vanishes for j >= d (its building block has modulus below -d), so the
    // full minor expansion is the sum over subsets of {n..d-1}; no degree
    // pruning is applied. The Z factor itself is unchanged at truncation:
    // its shift d*pert*v_d^- has degree n+d > d.
    std::map<std::pair<int, int>, GradedPoly> kc;
    const auto khat = [&](int i, int j) -> const GradedPoly& {
        auto it = kc.find({i, j});
        if (it == kc.end()) {
            GradedPoly acc = gp_zero(d);
            for (int l = 1; j + l <= d; ++l) acc = gp_add(acc, gp_mul(e_hat(i + l), f_hat(-(j + l))));
            it = kc.emplace(std::make_pair(i, j), std::move(acc)).first;
        }
        return it->second;
    };
    GradedPoly fred = gp_const(1, d);
    const int span = d - n;
    for (unsigned mask = 1; mask < (1u << span); ++mask) {
        std::vector<int> rows;
        for (int b = 0; b < span; ++b)
            if (mask >> b & 1) rows.push_back(n + b);
        const int m = static_cast<int>(rows.size());
        std::vector<std::vector<GradedPoly>> km(m, std::vector<GradedPoly>(m, gp_zero(d)));
        for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b) km[a][b] = khat(rows[a], rows[b]);
        const GradedPoly det = gp_det(km, d);
        fred = gp_add(fred, m % 2 ? gp_neg(det) : det);
    }
    const GradedPoly z_poly = exact_szego_poly(d);
    if (!gp_is_zero(gp_sub(gp_mul(z_poly, fred), gp_mul(z_poly, exact_fredholm(n, d)))))
        return {false, "Fredholm side moved"};
    return {true, ""};
}

Outcome criterion10() {
    bool ok = true;
    std::string note;
    for (const auto [n, d] : std::vector<std::pair<int, int>>{{2, 4}, {2, 6}, {3, 6}}) {
        const auto r = criterion10_exact_case(n, d);
        if (!r.ok)
            note += " exact(n=" + std::to_string(n) + ",d=" + std::to_string(d) + "):" + r.detail;
        ok = ok && r.ok;
    }

    double worst = 0.0, hi_move_min = std::numeric_limits<double>::infinity();
    double z_move_min = std::numeric_limits<double>::infinity();
    const int n = 4, m = 6;
    const cplx eps(1e-3, 5e-4);
    for (const auto& pc : acceptance_presets()) {
        const auto pert = perturb_high_modes(pc.spec, m, eps);
        const auto phi0 = phi_coeffs(pc.spec, -m - 1, m + 1);
        const auto phi1 = phi_coeffs(pert.spec, -m - 1, m + 1);
        const cplx d0 = toeplitz_det(phi0, n).value;
        const cplx d1 = toeplitz_det(phi1, n).value;
        const cplx z0 = szego_constant(pc.spec), z1 = szego_constant(pert.spec);
        const auto f0 = det_truncated(make_series_source(pc.spec), n, 1e-12);
        const auto f1 = det_truncated(make_series_source(pert.spec), n, 1e-12);
        const double lhs_rel = std::abs(d1 - d0) / std::abs(d0);
        const double rhs_rel = std::abs(z1 * f1.value - z0 * f0.value) / std::abs(z0 * f0.value);
        worst = std::max({worst, lhs_rel, rhs_rel});
        hi_move_min = std::min(hi_move_min, std::max(std::abs(phi1.at(m) - phi0.at(m)),
                                                     std::abs(phi1.at(-m) - phi0.at(-m))));
        // Z itself moves only at second order here: the admissibility
        // renormalization makes the first-order shifts of the two exponent
        // halves cancel in sum(k v_k^+ v_k^-) for balanced symbols.
        z_move_min = std::min(z_move_min, std::abs(z1 - z0) / std::abs(z0));
        ok = ok && f0.converged && f1.converged && lhs_rel <= 1e-11 && rhs_rel <= 1e-11;
    }
    ok = ok && hi_move_min > 1e-4 && z_move_min > 1e-10; // the perturbation must not be a no-op
    return {ok, "locality: perturbations touching only modes |k| >= n leave both sides unchanged "
                "— exact zero difference at (n,d) in {(2,4),(2,6),(3,6)}" +
                    note + "; numeric (n=4, modes +/-6) <= 1e-11 across presets (worst " +
                    fg(worst) + "; modes +/-6 moved by >= " + fg(hi_move_min) +
                    ", Z by >= " + fg(z_move_min) + ")"};
}

} // namespace

int main() {
    using CriterionFn = Outcome (*)();
    const CriterionFn fns[] = {criterion1, criterion2, criterion3, criterion4, criterion5,
                               criterion6, criterion7, criterion8, criterion9, criterion10};
    std::printf("acceptance gate: Toeplitz determinant == Z * Fredholm determinant\n");
    int passed = 0;
    for (int i = 0; i < 10; ++i) {
        Outcome r;
        try {
            r = fns[i]();
        } catch (const std::exception& e) {
            r = {false, std::string("exception: ") + e.what()};
        }
        passed += r.ok ? 1 : 0;
        std::printf("[%2d] %s  %s\n", i + 1, r.ok ? "PASS" : "FAIL", r.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("acceptance: %d/10 criteria passed\n", passed);
    return passed == 10 ? 0 : 1;
}

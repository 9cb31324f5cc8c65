#pragma once

#include <algorithm>
#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <toefred/rational.hpp>

namespace toefred {

// Variables of the graded algebra: v_k^+ has id 2k, v_k^- has id 2k+1 (k >= 1),
// so ids sort by (mode k, sign) with + before -. deg v_k^{+-} = k.
inline int var_id(bool plus, int k) { return 2 * k + (plus ? 0 : 1); }
inline int var_mode(int id) { return id / 2; }
inline bool var_plus(int id) { return id % 2 == 0; }

// Sparse monomial: (variable id, positive exponent) pairs, sorted by id.
using Monomial = std::vector<std::pair<int, int>>;

inline int mono_degree(const Monomial& m) {
    int s = 0;
    for (const auto& [id, e] : m) s += var_mode(id) * e;
    return s;
}

inline Monomial mono_mul(const Monomial& a, const Monomial& b) {
    Monomial out;
    out.reserve(a.size() + b.size());
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i].first < b[j].first) out.push_back(a[i++]);
        else if (a[i].first > b[j].first) out.push_back(b[j++]);
        else {
            out.emplace_back(a[i].first, a[i].second + b[j].second);
            ++i, ++j;
        }
    }
    out.insert(out.end(), a.begin() + i, a.end());
    out.insert(out.end(), b.begin() + j, b.end());
    return out;
}

inline std::string mono_str(const Monomial& m) {
    if (m.empty()) return "1";
    std::string s;
    for (const auto& [id, e] : m) {
        if (!s.empty()) s += "*";
        s += "v" + std::to_string(var_mode(id)) + (var_plus(id) ? "+" : "-");
        if (e > 1) s += "^" + std::to_string(e);
    }
    return s;
}

// Polynomial in the v-variables truncated at total degree d: every stored
// monomial has degree <= d and no zero coefficients are kept.
struct GradedPoly {
    int d = 0;
    std::map<Monomial, Rational> terms;

    bool operator==(const GradedPoly&) const = default;
};

inline GradedPoly gp_zero(int d) { return GradedPoly{d, {}}; }

inline GradedPoly gp_const(const Rational& c, int d) {
    GradedPoly p{d, {}};
    if (c != 0) p.terms[Monomial{}] = c;
    return p;
}

inline GradedPoly gp_var(bool plus, int k, int d) {
    if (k < 1) throw std::invalid_argument("gp_var: mode index must be >= 1");
    GradedPoly p{d, {}};
    if (k <= d) p.terms[Monomial{{var_id(plus, k), 1}}] = 1;
    return p;
}

inline bool gp_is_zero(const GradedPoly& p) { return p.terms.empty(); }

inline Rational gp_coeff(const GradedPoly& p, const Monomial& m) {
    auto it = p.terms.find(m);
    return it == p.terms.end() ? Rational(0) : it->second;
}

inline int gp_min_degree(const GradedPoly& p) {
    int best = std::numeric_limits<int>::max();
    for (const auto& [m, c] : p.terms) best = std::min(best, mono_degree(m));
    return best;
}

inline void gp_add_term(GradedPoly& p, const Monomial& m, const Rational& c) {
    if (c == 0 || mono_degree(m) > p.d) return;
    auto it = p.terms.find(m);
    if (it == p.terms.end()) {
        p.terms.emplace(m, c);
    } else {
        it->second += c;
        if (it->second == 0) p.terms.erase(it);
    }
}

namespace detail {
inline void gp_check_same_d(const GradedPoly& a, const GradedPoly& b, const char* who) {
    if (a.d != b.d) throw std::invalid_argument(std::string(who) + ": mismatched truncation degrees");
}
} // namespace detail

inline GradedPoly gp_add(const GradedPoly& a, const GradedPoly& b) {
    detail::gp_check_same_d(a, b, "gp_add");
    GradedPoly out = a;
    for (const auto& [m, c] : b.terms) gp_add_term(out, m, c);
    return out;
}

inline GradedPoly gp_neg(const GradedPoly& a) {
    GradedPoly out = a;
    for (auto& [m, c] : out.terms) c = -c;
    return out;
}

inline GradedPoly gp_sub(const GradedPoly& a, const GradedPoly& b) { return gp_add(a, gp_neg(b)); }

inline GradedPoly gp_scale(const GradedPoly& a, const Rational& c) {
    if (c == 0) return gp_zero(a.d);
    GradedPoly out = a;
    for (auto& [m, v] : out.terms) v *= c;
    return out;
}

inline GradedPoly gp_mul(const GradedPoly& a, const GradedPoly& b) {
    detail::gp_check_same_d(a, b, "gp_mul");
    GradedPoly out{a.d, {}};
    if (a.terms.empty() || b.terms.empty()) return out;

    struct Entry {
        int deg;
        const Monomial* m;
        const Rational* c;
    };
    std::vector<Entry> bs;
    bs.reserve(b.terms.size());
    for (const auto& [m, c] : b.terms) bs.push_back({mono_degree(m), &m, &c});
    std::sort(bs.begin(), bs.end(), [](const Entry& x, const Entry& y) { return x.deg < y.deg; });

    for (const auto& [ma, ca] : a.terms) {
        const int budget = a.d - mono_degree(ma);
        for (const auto& e : bs) {
            if (e.deg > budget) break;
            out.terms[mono_mul(ma, *e.m)] += ca * *e.c;
        }
    }
    for (auto it = out.terms.begin(); it != out.terms.end();)
        it = (it->second == 0) ? out.terms.erase(it) : std::next(it);
    return out;
}

// exp(a) = Σ_{m=0}^{d} a^m/m!, finite because the argument has no constant
// term so a^m has minimal degree >= m.
inline GradedPoly gp_exp(const GradedPoly& a) {
    if (a.terms.count(Monomial{}) != 0)
        throw std::invalid_argument("gp_exp: argument must have zero constant term");
    GradedPoly result = gp_const(1, a.d);
    GradedPoly term = gp_const(1, a.d);
    for (int m = 1; m <= a.d; ++m) {
        term = gp_scale(gp_mul(term, a), Rational(1, m));
        if (gp_is_zero(term)) break;
        result = gp_add(result, term);
    }
    return result;
}

// Coefficients of ζ^{±m} (m = 0..m_max) of exp(Σ_{k>=1} sign_of(k)·v_k ζ^{±k})
// over one variable family, via the recurrence m·b_m = Σ_k k·sign_of(k)·v_k·b_{m-k}.
template <class SignFn>
std::vector<GradedPoly> gp_exp_series(int m_max, bool plus_vars, SignFn&& sign_of, int d) {
    std::vector<GradedPoly> h(static_cast<std::size_t>(m_max) + 1, gp_zero(d));
    h[0] = gp_const(1, d);
    for (int m = 1; m <= m_max; ++m) {
        GradedPoly acc = gp_zero(d);
        for (int k = 1; k <= std::min(m, d); ++k) {
            const Rational c(sign_of(k) * k, m);
            acc = gp_add(acc, gp_scale(gp_mul(gp_var(plus_vars, k, d), h[m - k]), c));
        }
        h[m] = std::move(acc);
    }
    return h;
}

namespace detail {

// Leibniz expansion with zero-entry pruning; exact permutation sign tracking.
inline GradedPoly gp_det_leibniz(const std::vector<std::vector<GradedPoly>>& m, int d) {
    const int n = static_cast<int>(m.size());
    GradedPoly acc = gp_zero(d);
    std::vector<bool> used(n, false);
    std::function<void(int, const GradedPoly&, bool)> rec = [&](int row, const GradedPoly& running,
                                                                bool negative) {
        if (row == n) {
            acc = gp_add(acc, negative ? gp_neg(running) : running);
            return;
        }
        for (int c = 0; c < n; ++c) {
            if (used[c] || gp_is_zero(m[row][c])) continue;
            GradedPoly next = gp_mul(running, m[row][c]);
            if (gp_is_zero(next)) continue;
            int inv = 0;
            for (int u = c + 1; u < n; ++u)
                if (used[u]) ++inv;
            used[c] = true;
            rec(row + 1, next, negative ^ (inv % 2 == 1));
            used[c] = false;
        }
    };
    rec(0, gp_const(1, d), false);
    return acc;
}

// Column-subset dynamic program: D[mask] is the determinant of the submatrix
// of the first popcount(mask) rows and the columns in mask. Chosen over
// fraction-free elimination because the truncated ring has zero divisors.
inline GradedPoly gp_det_subsets(const std::vector<std::vector<GradedPoly>>& m, int d) {
    const int n = static_cast<int>(m.size());
    std::vector<GradedPoly> D(std::size_t{1} << n, gp_zero(d));
    D[0] = gp_const(1, d);
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
        const int row = __builtin_popcount(mask) - 1;
        GradedPoly acc = gp_zero(d);
        int pos = 0;
        for (int c = 0; c < n; ++c) {
            if (!(mask >> c & 1u)) continue;
            const GradedPoly& prev = D[mask ^ (1u << c)];
            if (!gp_is_zero(m[row][c]) && !gp_is_zero(prev)) {
                GradedPoly t = gp_mul(m[row][c], prev);
                acc = gp_add(acc, (row + pos) % 2 ? gp_neg(t) : t);
            }
            ++pos;
        }
        D[mask] = std::move(acc);
    }
    return D[(std::size_t{1} << n) - 1];
}

} // namespace detail

inline GradedPoly gp_det(const std::vector<std::vector<GradedPoly>>& m, int d) {
    for (const auto& row : m)
        if (row.size() != m.size()) throw std::invalid_argument("gp_det: matrix must be square");
    if (m.empty()) return gp_const(1, d);
    return m.size() <= 6 ? detail::gp_det_leibniz(m, d) : detail::gp_det_subsets(m, d);
}

// Numeric substitution: value_of_id maps a variable id to its complex value.
template <class ValueFn>
std::complex<double> gp_eval(const GradedPoly& p, ValueFn&& value_of_id) {
    std::complex<double> total{};
    for (const auto& [m, c] : p.terms) {
        std::complex<double> term{rational_double(c)};
        for (const auto& [id, e] : m) {
            const std::complex<double> v = value_of_id(id);
            for (int t = 0; t < e; ++t) term *= v;
        }
        total += term;
    }
    return total;
}

inline std::string gp_str(const GradedPoly& p) {
    if (p.terms.empty()) return "0";
    std::string s;
    for (const auto& [m, c] : p.terms) {
        if (!s.empty()) s += " + ";
        s += "(" + rational_str(c) + ")";
        if (!m.empty()) s += "*" + mono_str(m);
    }
    return s;
}

} // namespace toefred

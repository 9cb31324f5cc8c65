#pragma once

#include <vector>

#include <toefred/graded.hpp>

namespace toefred {

// Weakly decreasing positive parts; the empty vector is the empty partition.
using Partition = std::vector<int>;

inline int partition_size(const Partition& p) {
    int s = 0;
    for (int x : p) s += x;
    return s;
}

namespace detail {
inline void fill_partitions(int remaining, int max_part, Partition& cur,
                            std::vector<Partition>& out) {
    if (remaining == 0) {
        out.push_back(cur);
        return;
    }
    for (int part = std::min(remaining, max_part); part >= 1; --part) {
        cur.push_back(part);
        fill_partitions(remaining - part, part, cur, out);
        cur.pop_back();
    }
}
} // namespace detail

// All partitions of exactly m, in decreasing lexicographic order.
inline std::vector<Partition> partitions_of(int m) {
    std::vector<Partition> out;
    if (m < 0) return out;
    Partition cur;
    detail::fill_partitions(m, std::max(m, 1), cur, out);
    return out;
}

inline std::vector<Partition> partitions_up_to(int w) {
    std::vector<Partition> out;
    for (int m = 0; m <= w; ++m) {
        auto pm = partitions_of(m);
        out.insert(out.end(), pm.begin(), pm.end());
    }
    return out;
}

// Membership in S(λ) = {λ_i − i : i >= 1} with λ_i = 0 beyond the length:
// a finite positive excursion plus the automatic tail {−i : i > length}.
inline bool s_contains(const Partition& p, int x) {
    const int len = static_cast<int>(p.size());
    const int bound = std::max(len, x < 0 ? -x : 0);
    for (int i = 1; i <= bound; ++i) {
        const int part = i <= len ? p[i - 1] : 0;
        if (part - i == x) return true;
    }
    return false;
}

// True iff S(λ) ∩ {n, n+1, ...} is empty. For i beyond the length λ_i − i = −i
// is negative, so only stored parts can reach a nonnegative ray.
inline bool s_avoids_ray(const Partition& p, int n) {
    if (n < 0) throw std::invalid_argument("s_avoids_ray: ray start must be nonnegative");
    for (int i = 1; i <= static_cast<int>(p.size()); ++i)
        if (p[i - 1] - i >= n) return false;
    return true;
}

// h_m in the v-variables of one sign family: generating function
// Σ h_m ζ^m = exp(Σ_k t_k ζ^k) with the identification t_k = (−1)^{k+1} v_k.
inline std::vector<GradedPoly> complete_homogeneous(int m_max, bool plus, int d) {
    return gp_exp_series(m_max, plus, [](int k) { return k % 2 ? 1 : -1; }, d);
}

// Schur polynomial via the Jacobi–Trudi determinant det(h_{λ_i − i + j}).
inline GradedPoly schur_poly(const Partition& lam, bool plus, int d) {
    if (partition_size(lam) > d)
        throw std::invalid_argument("schur_poly: partition size exceeds the truncation degree");
    const int len = static_cast<int>(lam.size());
    if (len == 0) return gp_const(1, d);
    const auto h = complete_homogeneous(lam[0] + len - 1, plus, d);
    std::vector<std::vector<GradedPoly>> jt(len, std::vector<GradedPoly>(len, gp_zero(d)));
    for (int i = 1; i <= len; ++i)
        for (int j = 1; j <= len; ++j) {
            const int idx = lam[i - 1] - i + j;
            if (idx >= 0) jt[i - 1][j - 1] = h[idx];
        }
    return gp_det(jt, d);
}

} // namespace toefred

#include <catch2/catch_amalgamated.hpp>

#include <toefred/fredholm.hpp>
#include <toefred/toeplitz.hpp>

using namespace toefred;

namespace {

bool close(cplx a, cplx b, double tol) { return std::abs(a - b) <= tol; }

// K(i,j) = a^{i+j+2}: rank one, eigenvalue on {n,...} is a^{2n+2}/(1-a^2),
// so det(1-K) = 1 - a^{2n+2}/(1-a^2) in closed form.
KernelSource rank_one_source(double a) {
    KernelSource src;
    src.eval = [a](int i, int j) { return cplx{std::pow(a, i + j + 2)}; };
    src.decay = DecayBound{a * a, 1.0 / a};
    src.method = KernelMethod::series;
    return src;
}

} // namespace

TEST_CASE("det_truncated: zero kernel is exactly 1 at the smallest section") {
    auto res = det_truncated(make_series_source(SymbolSpec{}), 0, 1e-12);
    REQUIRE(res.value == cplx{1.0});
    REQUIRE(res.M == 8);
    REQUIRE(res.converged);
    REQUIRE(res.tail_bound < 1e-20);
}

TEST_CASE("det_truncated: rank-one kernel matches the closed-form determinant") {
    for (double a : {0.5, 0.3}) {
        auto src = rank_one_source(a);
        REQUIRE(verify_decay(src.eval, src.decay, 20));
        for (int n : {0, 3}) {
            const double expected = 1.0 - std::pow(a, 2 * n + 2) / (1.0 - a * a);
            auto res = det_truncated(src, n, 1e-13);
            REQUIRE(res.converged);
            REQUIRE(close(res.value, expected, 1e-13));
        }
    }
}

TEST_CASE("det_truncated: argument guards") {
    auto src = rank_one_source(0.5);
    REQUIRE_THROWS_AS(det_truncated(src, 0, 0.0), std::invalid_argument);
    REQUIRE_THROWS_AS(det_truncated(src, -1, 1e-10), std::invalid_argument);
    REQUIRE_THROWS_AS(det_truncated(src, 0, 1e-10, 4), std::invalid_argument);
}

TEST_CASE("det_truncated: non-convergence is reported, not thrown") {
    auto res = det_truncated(rank_one_source(0.999), 0, 1e-12, 64);
    REQUIRE_FALSE(res.converged);
    REQUIRE(res.M == 64);
    REQUIRE(res.tail_bound > 1e-12 * std::abs(res.value));
    REQUIRE(std::isfinite(res.value.real()));
}

TEST_CASE("det_truncated: agrees with the Toeplitz determinant identity") {
    const auto s = preset_bessel(1.0);
    auto res = det_truncated(make_series_source(s), 8, 1e-12);
    REQUIRE(res.converged);
    REQUIRE(std::abs(res.value - 1.0) < 1e-9); // tail of a rapidly decaying kernel

    const auto phi = phi_coeffs(s, -8, 8);
    const cplx d8 = toeplitz_det(phi, 8).value;
    REQUIRE(close(res.value, d8 / szego_constant(s), 1e-12));
}

TEST_CASE("det_truncated: monotone stabilization under section doubling") {
    auto src = make_series_source(preset_charlier(2.0, 0.5));
    auto section_det = [&](int M) {
        Eigen::MatrixXcd A = -kernel_block(src, 0, M);
        A.diagonal().array() += 1.0;
        return Eigen::PartialPivLU<Eigen::MatrixXcd>(A).determinant();
    };
    const double d1 = std::abs(section_det(4) - section_det(2));
    const double d2 = std::abs(section_det(8) - section_det(4));
    const double d3 = std::abs(section_det(16) - section_det(8));
    REQUIRE(d2 < d1);
    REQUIRE(d3 < d2);
    REQUIRE(d1 > 1e-14); // the decreases above are real, not roundoff floor
}

TEST_CASE("det_truncated: zero row and column shift the start index harmlessly") {
    const double a = 0.6;
    KernelSource src;
    src.eval = [a](int i, int j) {
        return (i == 0 || j == 0) ? cplx{} : cplx{std::pow(a, i + j + 2)};
    };
    src.decay = DecayBound{a * a, 1.0 / a};
    src.method = KernelMethod::series;
    auto r0 = det_truncated(src, 0, 1e-13);
    auto r1 = det_truncated(src, 1, 1e-13);
    REQUIRE(r0.converged);
    REQUIRE(r1.converged);
    REQUIRE(close(r0.value, r1.value, 1e-12));
}

TEST_CASE("det_truncated: quadrature and series sources give the same value") {
    const auto s = preset_charlier(2.0, 0.5);
    auto rs = det_truncated(make_series_source(s), 1, 1e-12);
    auto rq = det_truncated(make_quadrature_source(s), 1, 1e-12);
    REQUIRE(rs.converged);
    REQUIRE(rq.converged);
    REQUIRE(close(rs.value, rq.value, 1e-10));
}

TEST_CASE("det_series: zero kernel and guards") {
    auto zero = make_series_source(SymbolSpec{});
    REQUIRE(det_series(zero, 0, 3, 20) == cplx{1.0});
    REQUIRE_THROWS_AS(det_series(zero, 0, 5, 20), std::invalid_argument);
    REQUIRE_THROWS_AS(det_series(zero, 0, -1, 20), std::invalid_argument);
    REQUIRE_THROWS_AS(det_series(zero, -1, 2, 20), std::invalid_argument);
}

TEST_CASE("det_series: rank-one kernel keeps only the m=1 terms") {
    const double a = 0.5;
    auto src = rank_one_source(a);
    const int L = 24;
    double partial = 0.0;
    for (int l = 0; l <= L; ++l) partial += std::pow(a, 2 * l + 2);
    const cplx via2 = det_series(src, 0, 2, L);
    REQUIRE(close(via2, 1.0 - partial, 1e-15));
    REQUIRE(close(det_series(src, 0, 4, L), via2, 1e-15));
}

TEST_CASE("det_series: cross-checks det_truncated in a small-kernel regime") {
    auto src = make_series_source(preset_bessel(0.3));
    auto truncated = det_truncated(src, 4, 1e-13);
    REQUIRE(truncated.converged);
    REQUIRE(close(det_series(src, 4, 3, 34), truncated.value, 1e-12));
}

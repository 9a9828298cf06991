#include <cmath>

#include "doctest.h"
#include "magbar/errors.hpp"
#include "magbar/fiber.hpp"
#include "magbar/tridiag.hpp"
#include "oracle.hpp"

using namespace magbar;

namespace {
const FiberOptions kOpt{4000, 4.0, 18.0, true};
}

TEST_CASE("band index helpers") {
    CHECK(parity_of_band(1) == Parity::Even);
    CHECK(parity_of_band(4) == Parity::Odd);
    CHECK(ordinal_of_band(5) == 3);
    CHECK(ordinal_of_band(6) == 3);
    for (int j = 1; j <= 10; ++j) CHECK(global_band(parity_of_band(j), ordinal_of_band(j)) == j);
    CHECK(landau_level(0, 3.0) == 0.0);
    CHECK(landau_level(3, 2.0) == 10.0);
}

TEST_CASE("band values agree with the shooting oracle") {
    struct Case {
        double b, k;
        int j;
    };
    for (const Case c : {Case{1, 0.0, 1}, Case{1, -2.0, 1}, Case{1, 1.5, 2}, Case{4, 3.0, 3}, Case{0.25, 0.7, 5},
                         Case{9, -4.0, 4}, Case{1, 4.5, 1}}) {
        const double ref = oracle::band(c.b, c.k, c.j);
        const double got = band_pair(c.b, c.k, c.j, kOpt).omega;
        CAPTURE(c.b);
        CAPTURE(c.k);
        CAPTURE(c.j);
        CHECK(std::fabs(got / ref - 1.0) < 1e-8);
    }
}

TEST_CASE("oscillator levels at k = 0") {
    for (double b : {1.0, 3.0}) {
        const auto ev = solve_levels(b, 0.0, Parity::Even, 3, kOpt);
        const auto od = solve_levels(b, 0.0, Parity::Odd, 3, kOpt);
        for (int m = 0; m < 3; ++m) {
            CHECK(ev[m].omega == doctest::Approx((4 * m + 1) * b).epsilon(1e-7));
            CHECK(od[m].omega == doctest::Approx((4 * m + 3) * b).epsilon(1e-7));
        }
    }
}

TEST_CASE("eigenfunction normalization and sign convention") {
    for (int j = 1; j <= 4; ++j) {
        const auto p = band_pair(1.0, 0.8, j, kOpt);
        CHECK(inner_product(p, p) == doctest::Approx(1.0).epsilon(1e-9));
        if (p.parity == Parity::Even) {
            CHECK(p.psi0 > 0.0);
        } else {
            CHECK(p.psi0 == doctest::Approx(0.0));
            CHECK(p.dpsi0 > 0.0);
        }
    }
    // Orthogonality needs both states on one grid.
    const auto ev = solve_levels(1.0, 0.8, Parity::Even, 2, kOpt);
    CHECK(std::fabs(inner_product(ev[0], ev[1])) < 1e-8);
}

TEST_CASE("Richardson extrapolation beats the fine grid") {
    const double ref = oracle::band(1.0, 0.5, 1);
    const auto p = build_problem(1.0, 0.5, Parity::Even, 1, 800);
    const auto r = solve_refined(p, 1);
    const double e_coarse = std::fabs(r.coarse[0].omega - ref);
    const double e_fine = std::fabs(r.fine[0].omega - ref);
    const double e_ext = std::fabs(r.extrapolated[0].omega - ref);
    CHECK(e_fine < e_coarse);
    CHECK(e_fine / e_coarse == doctest::Approx(0.25).epsilon(0.05));  // second order
    CHECK(e_ext < 0.05 * e_fine);
}

TEST_CASE("wall placement respects the margin and decay requirement") {
    const auto p = build_problem(2.0, 3.0, Parity::Odd, 4, kOpt);
    CHECK(p.grid.L > 3.0 / 2.0);
    CHECK(p.grid.N == kOpt.N);
    const auto q = with_k(p, -1.0);
    CHECK(q.grid.L == p.grid.L);
    CHECK(refined(p, 2).grid.N == 2 * p.grid.N);
    CHECK_THROWS_AS(build_problem(-1.0, 0.0, Parity::Even, 1, kOpt), DomainError);
    CHECK_THROWS_AS(build_problem(1.0, 0.0, Parity::Even, 1, 10), ConfigurationError);
}

TEST_CASE("merge_parities interlaces and rejects crossings") {
    auto ev = solve_levels(1.0, 1.0, Parity::Even, 3, kOpt);
    auto od = solve_levels(1.0, 1.0, Parity::Odd, 3, kOpt);
    const auto all = merge_parities(ev, od, 1.0);
    REQUIRE(all.size() == 6);
    for (std::size_t i = 0; i < all.size(); ++i) {
        CHECK(all[i].j == static_cast<int>(i) + 1);
        if (i > 0) CHECK(all[i].omega > all[i - 1].omega);
    }
    std::swap(ev[1].omega, od[1].omega);
    std::swap(ev[1].omega, od[0].omega);
    CHECK_THROWS(merge_parities(ev, od, 1.0));
}

TEST_CASE("tridiagonal kernels") {
    // Path-graph Laplacian with known spectrum 2 - 2 cos(i pi / (n+1)).
    const std::size_t n = 50;
    SymTridiag t{std::vector<double>(n, 2.0), std::vector<double>(n - 1, -1.0)};
    const auto low = lowest_eigenvalues(t, 5);
    for (std::size_t i = 0; i < 5; ++i) {
        CHECK(low[i] == doctest::Approx(2.0 - 2.0 * std::cos((i + 1) * M_PI / (n + 1))).epsilon(1e-12));
    }
    CHECK(sturm_count(t, 0.5 * (low[2] + low[3])) == 3);
    double lo, hi;
    gershgorin(t, lo, hi);
    CHECK(lo <= 0.0);
    CHECK(hi >= 4.0);
    std::vector<double> rhs(n, 1.0);
    const auto x = tridiag_solve(t, 0.3, rhs);
    const auto ax = tridiag_apply(t, x);
    for (std::size_t i = 0; i < n; ++i) CHECK(ax[i] - 0.3 * x[i] == doctest::Approx(1.0).epsilon(1e-10));
    const auto v = inverse_iteration(t, low[0]);
    const auto av = tridiag_apply(t, v);
    for (std::size_t i = 0; i < n; ++i) CHECK(av[i] == doctest::Approx(low[0] * v[i]).epsilon(1e-8).scale(1e-3));
}

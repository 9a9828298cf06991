#include <cmath>

#include "doctest.h"
#include "magbar/errors.hpp"
#include "magbar/mourre.hpp"
#include "oracle.hpp"

using namespace magbar;

namespace {

const BandInterpolant& bands_b1_n1() {
    static const BandInterpolant b = window_bands(1, 1.0);
    return b;
}

// Preimage of [lo, hi] on the decreasing branch of band j, by oracle bisection.
double oracle_inverse(int j, double w, double k_lo, double k_hi) {
    for (int it = 0; it < 50; ++it) {
        const double mid = 0.5 * (k_lo + k_hi);
        (oracle::band(1.0, mid, j) > w ? k_lo : k_hi) = mid;
    }
    return 0.5 * (k_lo + k_hi);
}

}  // namespace

TEST_CASE("interpolant reproduces off-grid band values") {
    const auto& B = bands_b1_n1();
    for (double k : {-1.234, 0.1111, 0.9, 2.345}) {
        for (int j = 1; j <= 2; ++j) {
            CHECK(B.value(j, k) == doctest::Approx(oracle::band(1.0, k, j)).epsilon(1e-6));
        }
    }
    // inverse is a right inverse on the decreasing branch.
    for (double w : {1.2, 1.8, 2.4}) {
        const auto k = B.inverse(2, w);
        REQUIRE(k.has_value());
        CHECK(B.value(2, *k) == doctest::Approx(w).epsilon(1e-10));
    }
    // Below the odd-band floor there is no bounded preimage.
    CHECK_FALSE(B.inverse(2, 0.99).has_value());
}

TEST_CASE("delta0 supremum is half the window for E at its centre") {
    const auto& B = bands_b1_n1();
    const double e2 = oracle::band_b1(1.62322, true, 2);  // second even minimum, to ~1e-10
    const double E = 0.5 * (1.0 + e2);
    CHECK(find_delta0(1, E, B) == doctest::Approx(0.5 * (e2 - 1.0)).epsilon(1e-6));
    CHECK(working_delta0(1, E, B) == doctest::Approx(0.25 * (e2 - 1.0)).epsilon(1e-6));
    // An energy outside the window has no admissible delta0.
    CHECK_THROWS(find_delta0(1, 0.5, B));
}

TEST_CASE("Mourre constant against an oracle scan of the band slopes") {
    const auto& B = bands_b1_n1();
    const double E = 0.5 * (1.0 + B.records().at(1).energy);
    const double d0 = working_delta0(1, E, B);
    const auto rep = mourre_constant(1, E, d0, B);
    REQUIRE(rep.preimages.size() == 2);
    CHECK(rep.upper_bands_empty);
    const double lo = E - d0, hi = E + d0;
    double c_ref = INFINITY;
    for (int j = 1; j <= 2; ++j) {
        const double k_hi = oracle_inverse(j, lo, -6.0, j == 1 ? 0.76818 : 8.0);
        const double k_lo = oracle_inverse(j, hi, -6.0, j == 1 ? 0.76818 : 8.0);
        CHECK(rep.preimages[j - 1].lo == doctest::Approx(k_lo).epsilon(1e-6));
        CHECK(rep.preimages[j - 1].hi == doctest::Approx(k_hi).epsilon(1e-6));
        for (int i = 0; i <= 24; ++i) {
            const double k = k_lo + (k_hi - k_lo) * i / 24.0, h = 1e-3;
            c_ref = std::min(c_ref, -(oracle::band(1.0, k + h, j) - oracle::band(1.0, k - h, j)) / (2 * h));
        }
    }
    // The coarse oracle scan can only overestimate the minimum.
    CHECK(rep.c_n <= c_ref + 1e-6);
    CHECK(rep.c_n == doctest::Approx(c_ref).epsilon(5e-3));
}

TEST_CASE("edge current of a one-band Gaussian state") {
    const auto& B = bands_b1_n1();
    const double E = 0.5 * (1.0 + B.records().at(1).energy);
    const auto rep = mourre_constant(1, E, working_delta0(1, E, B), B);
    const auto& pre = rep.preimages[1];
    const double k0 = 0.5 * (pre.lo + pre.hi);
    const auto st = gaussian_fiber_state(rep, B, 2, k0, 0.01 * (pre.hi - pre.lo));
    const auto ec = edge_current_fiber(st, rep, B);
    // A narrow wave packet carries half the group velocity.
    CHECK(ec.J / ec.norm2 == doctest::Approx(-0.5 * B.derivative(2, k0)).epsilon(1e-3));
    CHECK(ec.pass);
    const auto later = edge_current_fiber(evolve(st, B, 11.0), rep, B);
    CHECK(later.J == doctest::Approx(ec.J).epsilon(1e-14));
    CHECK(evolve(st, B, 11.0).norm2() == doctest::Approx(st.norm2()).epsilon(1e-14));
}

TEST_CASE("f_n and F_{n,E} match the defining formulas") {
    const double d = 0.1, a = 0.01, q = 0.02, d0 = 0.4, c = 0.8;
    for (int n : {1, 2}) {
        const double f = d + q + 2 * std::sqrt(a) * (3 * std::sqrt(a) + std::sqrt(2 * n + 1 + d + q));
        CHECK(f_n(d, a, q, n) == doctest::Approx(f).epsilon(1e-15));
        const double F = (f / d0) * (f / d0) + 2 / c * (std::sqrt(a) + std::sqrt(2 * n + 1 + f) * std::sqrt(f / d0));
        CHECK(F_nE(d, a, q, n, d0, c) == doctest::Approx(F).epsilon(1e-15));
    }
    CHECK_THROWS_AS(f_n(-1, 0, 0, 1), DomainError);
    CHECK_THROWS_AS(F_nE(0.1, 0, 0, 1, 0.0, 1.0), DomainError);
}

TEST_CASE("perturbation budget is admissible and nearly maximal") {
    const auto& B = bands_b1_n1();
    const double E = 0.5 * (1.0 + B.records().at(1).energy);
    const auto rep = mourre_constant(1, E, working_delta0(1, E, B), B);
    const auto pb = perturbation_budget(rep);
    CHECK(pb.a_star > 0.0);
    CHECK(pb.q_star > 0.0);
    CHECK(pb.F < 0.5);
    CHECK(F_nE(pb.delta, pb.a_star, pb.q_star, 1, rep.delta0, rep.c_n) == doctest::Approx(pb.F));
    CHECK(F_nE(pb.delta, 2 * pb.a_star, 2 * pb.q_star, 1, rep.delta0, rep.c_n) >= 0.5);
    const auto half = perturbation_budget(rep, 0.5, 0.5);
    CHECK(half.c_used == doctest::Approx(0.5 * rep.c_n));
    CHECK(half.a_star * half.q_star < pb.a_star * pb.q_star);
}

TEST_CASE("landau_window") {
    MinimumRecord next;
    next.j = 2;
    next.energy = 2.63;
    const auto w = landau_window(1, 1.0, next);
    CHECK(w.lo == 1.0);
    CHECK(w.hi == 2.63);
    CHECK(w.contains(1.5));
    CHECK_FALSE(w.contains(3.0));
}

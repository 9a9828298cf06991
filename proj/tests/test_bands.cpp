#include <cmath>

#include "doctest.h"
#include "magbar/bands.hpp"
#include "magbar/errors.hpp"
#include "magbar/fit.hpp"
#include "oracle.hpp"

using namespace magbar;

namespace {
const FiberOptions kOpt{4000, 4.0, 18.0, true};

// Central difference of the oracle; accurate to ~1e-7 at this step.
double oracle_slope(double b, double k, int j) {
    const double h = 1e-3 * std::sqrt(b);
    return (oracle::band(b, k + h, j) - oracle::band(b, k - h, j)) / (2 * h);
}
}  // namespace

TEST_CASE("three derivative routes agree with each other and the oracle") {
    for (auto [b, k, j] : {std::tuple{1.0, -1.0, 1}, std::tuple{1.0, 0.6, 2}, std::tuple{4.0, 2.0, 3},
                           std::tuple{1.0, 2.5, 4}}) {
        const auto p = band_pair(b, k, j, kOpt);
        const double fh = derivative_fh(p, b, k), bd = derivative_boundary(p, b, k), fd = derivative_fd(b, k, j, kOpt);
        CAPTURE(k);
        CAPTURE(j);
        CHECK(fh == doctest::Approx(bd).epsilon(1e-5));
        CHECK(fd == doctest::Approx(bd).epsilon(1e-5));
        CHECK(bd == doctest::Approx(oracle_slope(b, k, j)).epsilon(1e-5));
    }
}

TEST_CASE("even band minima agree with the oracle") {
    // Frozen from the shooting oracle (golden section on band_b1).
    const double energies[] = {0.590106124799, 2.634859402309, 4.644812754241};
    const double kappas[] = {0.76818, 1.62322, 2.15518};
    for (int m = 1; m <= 3; ++m) {
        const auto rec = find_minimum(m, 1.0, kOpt);
        CHECK(rec.energy == doctest::Approx(energies[m - 1]).epsilon(1e-9));
        CHECK(rec.kappa == doctest::Approx(kappas[m - 1]).epsilon(1e-4));
        CHECK(rec.energy == doctest::Approx(rec.kappa * rec.kappa).epsilon(1e-9));
    }
}

TEST_CASE("minimum scales with the field") {
    const auto r1 = find_minimum(1, 1.0, kOpt), r4 = find_minimum(1, 4.0, kOpt);
    CHECK(r4.kappa == doctest::Approx(2.0 * r1.kappa).epsilon(1e-7));
    CHECK(r4.energy == doctest::Approx(4.0 * r1.energy).epsilon(1e-8));
    // beta = omega''/2 is scale invariant.
    CHECK(r4.beta == doctest::Approx(r1.beta).epsilon(1e-6));
}

TEST_CASE("effective mass against an oracle second difference") {
    const auto rec = find_minimum(1, 1.0, kOpt);
    const double h = 0.02;
    const double d2 = (oracle::band(1, rec.kappa + h, 1) - 2 * oracle::band(1, rec.kappa, 1) +
                       oracle::band(1, rec.kappa - h, 1)) / (h * h);
    CHECK(rec.beta == doctest::Approx(0.5 * d2).epsilon(1e-3));
    const auto em = effective_mass(rec, 1.0, kOpt);
    CHECK(em.relative_gap < 1e-3);
    CHECK(em.closed_form == doctest::Approx(rec.beta));
}

TEST_CASE("trace produces ordered, decreasing-then-increasing bands") {
    TraceOptions opt;
    opt.jobs = 1;
    const auto t = trace(1.0, -3.0, 4.0, 4, 40, opt);
    CHECK(t.n_bands() == 4);
    CHECK(t.ks.size() >= 40);
    for (std::size_t i = 1; i < t.ks.size(); ++i) CHECK(t.ks[i] > t.ks[i - 1]);
    for (std::size_t i = 0; i < t.ks.size(); ++i) {
        for (int j = 1; j < 4; ++j) CHECK(t.bands[j][i].omega > t.bands[j - 1][i].omega);
    }
    const auto rep = monotonicity_report(t);
    CHECK(rep.ok());
    REQUIRE(rep.even_sign_flips.size() == 2);
    CHECK(rep.even_sign_flips[0] == 1);
    // Located to within one sampling step.
    CHECK(std::fabs(rep.even_flip_k[0] - 0.768) < (t.ks.back() - t.ks.front()) / 39.0);
    CHECK_THROWS_AS(trace(1.0, 1.0, 0.0, 2, 10), DomainError);
}

TEST_CASE("sample_bands returns all bands with both derivatives") {
    const auto s = sample_bands(2.0, 0.3, 5, kOpt);
    REQUIRE(s.size() == 5);
    for (const auto& x : s) CHECK(x.domega_fh == doctest::Approx(x.domega_bd).epsilon(1e-5));
}

TEST_CASE("linear_fit") {
    const auto f = linear_fit({0, 1, 2, 3}, {1, 3, 5, 7});
    CHECK(f.slope == doctest::Approx(2.0));
    CHECK(f.intercept == doctest::Approx(1.0));
    CHECK(f.r2 == doctest::Approx(1.0));
    CHECK_THROWS_AS(linear_fit({1, 1}, {0, 1}), DomainError);
}

#include <cmath>

#include "doctest.h"
#include "magbar/asymptotics.hpp"
#include "magbar/errors.hpp"
#include "oracle.hpp"

using namespace magbar;

TEST_CASE("Airy prediction formula") {
    const auto p = airy_prediction(1.0, -20.0, 1);
    const double z = specfun::airy_zero(specfun::AiryKind::ZeroOfAiPrime, 1);
    // Even band 1 pairs with the first zero of Ai'.
    CHECK(p.constants.z == doctest::Approx(z));
    CHECK(p.predicted == doctest::Approx(400.0 - std::pow(40.0, 2.0 / 3.0) * z));
    CHECK(p.bound == doctest::Approx(p.constants.D / std::pow(40.0, 2.0 / 3.0)));
    CHECK(airy_prediction(1.0, -20.0, 2).constants.kind == specfun::AiryKind::ZeroOfAi);
    CHECK_THROWS_AS(airy_prediction(1.0, 1.0, 1), DomainError);
}

TEST_CASE("Airy regime error is within the bound, checked against the oracle") {
    for (int j = 1; j <= 4; ++j) {
        const auto c = airy_check(1.0, -15.0, j);
        CHECK(c.pass);
        CHECK(c.omega == doctest::Approx(oracle::band(1.0, -15.0, j)).epsilon(1e-9));
        CHECK(c.measured_error <= c.bound);
    }
}

TEST_CASE("Airy quasimode residual identity") {
    const auto r = airy_residual(1.0, -10.0, 1);
    CHECK(r.norm == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(r.identity_gap < 1e-8);
    CHECK(r.residual == doctest::Approx(r.multiplier).epsilon(1e-6));
    CHECK(r.residual <= r.bound * (1 + 1e-9));
}

TEST_CASE("oscillator regime gaps") {
    const auto h = ho_check(1.0, 4.0, 1);
    CHECK(h.pass);
    CHECK(h.level == 1.0);
    CHECK(h.gap_plus > 0.0);
    CHECK(h.gap_minus > 0.0);
    CHECK(h.gap_plus == doctest::Approx(h.gap_plus_direct).epsilon(1e-4));
}

TEST_CASE("parity splitting against the oracle") {
    for (double k : {2.0, 3.0}) {
        const double ref = oracle::band(1.0, k, 2) - oracle::band(1.0, k, 1);
        CHECK(splitting(1.0, k, 1) == doctest::Approx(ref).epsilon(1e-5));
    }
}

TEST_CASE("splitting fit decays at least at the proven rate") {
    const auto f = splitting_fit(1.0, 1, {3.0, 3.5, 4.0, 4.5, 5.0});
    CHECK(f.nonnegative);
    CHECK(f.rate <= -0.25);
    CHECK(f.fit.r2 >= 0.99);
    for (std::size_t i = 0; i < f.ks.size(); ++i) {
        CHECK(f.splittings[i] <= 2.0 * f.fitted_C * std::exp(-f.ks[i] * f.ks[i] / 4.0) * (1 + 1e-12));
    }
    CHECK_THROWS_AS(splitting_fit(1.0, 1, {3.0}), DomainError);
}

#include <cmath>

#include "doctest.h"
#include "magbar/errors.hpp"
#include "magbar/localization.hpp"

using namespace magbar;

namespace {
const FiberOptions kOpt{4000, 4.0, 18.0, true};
}

TEST_CASE("turning point") {
    CHECK(turning_point(2.0, 4.0, 9.0) == doctest::Approx((2.0 + 3.0) / 4.0));
    CHECK(turning_point(-2.0, 1.0, 9.0) == doctest::Approx(3.0));
    CHECK_THROWS_AS(turning_point(0.0, 0.0, 1.0), DomainError);
}

TEST_CASE("Gaussian envelope bounds eigenfunctions beyond the turning point") {
    for (double b : {1.0, 25.0}) {
        for (int j = 1; j <= 2; ++j) {
            for (double k : {-0.5, 0.3, 1.2}) {
                const double ks = k * std::sqrt(b);
                const auto pair = band_pair(b, ks, j, kOpt);
                const auto c = envelope_check(pair, b, ks);
                CHECK(c.envelope_ok);
                CHECK(c.max_ratio <= 1.0 + kEnvelopeTolerance);
                CHECK(c.prefactor == doctest::Approx(std::pow(2 * b / M_PI, 0.25)));
                CHECK(c.x_n == doctest::Approx(turning_point(ks, b, pair.omega)));
            }
        }
    }
}

TEST_CASE("mass splits and tail mass") {
    const auto pair = band_pair(4.0, 1.0, 1, kOpt);
    for (double r : {0.1, 0.5, 1.0, 3.0}) {
        const auto s = split_mass(pair, r);
        CHECK(s.inside + s.outside == doctest::Approx(1.0).epsilon(1e-10));
    }
    CHECK(split_mass(pair, 0.5).inside < split_mass(pair, 1.0).inside);
    CHECK(tail_mass(pair) < 1e-12);
}

TEST_CASE("strip mass for random window states") {
    const double b = 100.0;
    const auto B = window_bands(1, b);
    const double E = 0.5 * (b + B.records().at(1).energy);
    const auto rep = mourre_constant(1, E, working_delta0(1, E, B), B);
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        const auto st = normalized(random_fiber_state(rep, B, seed));
        CHECK(st.norm2() == doctest::Approx(1.0).epsilon(1e-12));
        const auto m = strip_mass(st, B, 0.25);
        CHECK(m.radius == doctest::Approx(std::pow(b, -0.25)));
        CHECK(m.bound == doctest::Approx(1 - std::sqrt(2.0) * std::exp(-std::pow(b, 0.25))));
        CHECK(m.inside + m.outside == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(m.pass);
    }
}

#include <cmath>

#include <Eigen/Dense>

#include "doctest.h"
#include "magbar/counting.hpp"
#include "magbar/errors.hpp"
#include "magbar/specfun.hpp"

using namespace magbar;

namespace {

// Semiclassical count of -m^2 d^2/dy^2 - ell |y|^{-alpha} below -1, by
// direct quadrature of the phase-space volume.
double phase_space_constant(double alpha, double ell, double m) {
    const double Y = std::pow(ell, 1.0 / alpha);
    // y = Y s^2 removes the square-root endpoint singularity at the turning point.
    auto f = [&](double s) {
        if (s <= 0.0) return 0.0;
        const double y = Y * s * s;
        return std::sqrt(std::max(ell * std::pow(y, -alpha) - 1.0, 0.0)) * 2.0 * Y * s;
    };
    const double I = specfun::integrate(f, 0.0, 1.0, 1e-11, 1e-14, 20000).value;
    return 2.0 / (M_PI * m) * I;
}

long dense_count(const SymTridiag& t, double shift) {
    const int n = static_cast<int>(t.size());
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        A(i, i) = t.d[i];
        if (i + 1 < n) A(i, i + 1) = A(i + 1, i) = t.e[i];
    }
    const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(A, Eigen::EigenvaluesOnly).eigenvalues();
    return static_cast<long>((ev.array() < shift).count());
}

}  // namespace

TEST_CASE("counting constants match the phase-space volume") {
    for (auto [alpha, ell, m] : {std::tuple{1.0, 1.0, 1.0}, std::tuple{1.3, 0.7, 1.4}, std::tuple{0.6, 2.0, 0.8}}) {
        CHECK(weyl_constant_1d(alpha, ell, m) == doctest::Approx(phase_space_constant(alpha, ell, m)).epsilon(1e-7));
    }
    CHECK(weyl_constant_1d(1.0, 1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-14));
    // The two-dimensional constant is the one-dimensional one with m = sqrt(beta1).
    CHECK(threshold_count_constant(1.2, 0.6, 0.59) == doctest::Approx(weyl_constant_1d(1.2, 0.6, std::sqrt(0.59))));
    CHECK_THROWS_AS(weyl_constant_1d(2.0, 1.0, 1.0), DomainError);
    CHECK_THROWS_AS(threshold_count_constant(1.0, 1.0, 0.0), DomainError);
}

TEST_CASE("separable potential satisfies the decay bound") {
    const auto V = separable_potential(1.0, 2.0);
    CHECK(V.separable());
    const auto rep = check_decay_bound(V);
    CHECK(rep.ok);
    CHECK(rep.max_violation <= 0.0);
    CHECK(rep.min_value >= 0.0);
    DecayPotential slow = V;
    slow.full = [](double x, double y) { return 1.0 / (1.0 + std::fabs(x)) * std::pow(1.0 + std::fabs(y), -0.5); };
    CHECK_FALSE(check_decay_bound(slow).ok);
}

TEST_CASE("tail limit of reduced potentials") {
    const auto Q = reduced_from_function(1.5, [](double y) { return 0.8 * std::pow(1.0 + y * y, -0.75); });
    CHECK(Q.ell == doctest::Approx(0.8).epsilon(1e-5));
    CHECK_THROWS(reduced_from_function(1.0, [](double y) { return std::exp(-y * y); }));
}

TEST_CASE("Sturm count, inertia and dense spectrum agree on the reduced operator") {
    const auto Q = reduced_from_function(1.0, [](double y) { return 1.0 / std::sqrt(1.0 + y * y); });
    const auto t = reduced_operator(1.0, Q, 200.0, 0.2);
    for (double lam : {1e-3, 1e-2, 0.1}) {
        const long dense = dense_count(t, -lam);
        CHECK(inertia_count(t, -lam) == dense);
        CHECK(static_cast<long>(sturm_count(t, -lam)) == dense);
    }
}

TEST_CASE("1D count approaches the semiclassical constant") {
    const auto Q = reduced_from_function(1.0, [](double y) { return 1.0 / std::sqrt(1.0 + y * y); });
    const auto c = count_1d(1.0, Q, 1e-4);
    const double ratio = std::sqrt(1e-4) * static_cast<double>(c.count);
    CHECK(ratio > 0.85);
    CHECK(ratio < 1.15);
    CHECK(c.half_width >= 50.0);
    CHECK_THROWS_AS(count_1d(1.0, Q, 0.0), DomainError);
}

TEST_CASE("Birman-Schwinger count equals direct count") {
    for (double lam : {0.01, 0.05, 0.2}) {
        const auto r = birman_schwinger_check(1.0, [](double y) { return 2.0 / (1.0 + y * y); }, lam, 30.0, 200);
        CHECK(r.equal);
        CHECK(r.direct == r.bs);
    }
    CHECK_THROWS_AS(birman_schwinger_check(1.0, [](double) { return -1.0; }, 0.1, 10.0, 50), PreconditionError);
}

TEST_CASE("asymptotics_check preconditions and exact power law") {
    CountingCurve c;
    c.lambdas = {1e-1, 1e-2};
    c.counts = {1, 3};
    CHECK_THROWS_AS(asymptotics_check(c, 1.0, 1.0), PreconditionError);
    CountingCurve exact;
    for (double lam : {1e-2, 1e-3, 1e-4, 1e-5}) {
        exact.lambdas.push_back(lam);
        exact.counts.push_back(std::lround(2.0 * std::pow(lam, -0.5)));
    }
    const auto a = asymptotics_check(exact, 1.0, 2.0);
    CHECK(a.exponent_gap < 1e-2);
    CHECK(a.prefactor_ratio == doctest::Approx(1.0).epsilon(2e-2));
}

TEST_CASE("discrete threshold approaches the band minimum") {
    Grid2DCount coarse, fine;
    fine.hx = 0.075;
    fine.hy = 0.25;
    const auto tc = discrete_threshold(1.0, coarse), tf = discrete_threshold(1.0, fine);
    const double E1 = 0.590106124799;
    CHECK(std::fabs(tf.energy - E1) < std::fabs(tc.energy - E1));
    CHECK(std::fabs(tc.energy - E1) < 0.01);
    CHECK(tc.k == doctest::Approx(0.768).epsilon(0.02));
}

TEST_CASE("2D count is monotone and guards its budget") {
    const auto V = separable_potential(1.0, 1.0);
    Grid2DCount g;
    const auto th = discrete_threshold(1.0, g);
    const auto big = count_2d(1.0, V, 0.6176, 0.03 * th.energy, g, th);
    const auto small = count_2d(1.0, V, 0.6176, 0.01 * th.energy, g, th);
    CHECK(big.count >= 1);
    CHECK(small.count >= big.count);
    Grid2DCount tiny = g;
    tiny.max_unknowns = 100;
    CHECK_THROWS_AS(count_2d(1.0, V, 0.6176, 0.03 * th.energy, tiny, th), CapabilityError);
    CHECK_THROWS_AS(count_2d(1.0, V, 0.6176, 2.0 * th.energy, g, th), DomainError);
}

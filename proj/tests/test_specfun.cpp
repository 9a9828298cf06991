#include <cmath>
#include <numbers>

#include "doctest.h"
#include "magbar/errors.hpp"
#include "magbar/specfun.hpp"

using namespace magbar;
using namespace magbar::specfun;

namespace {

// Maclaurin series of Ai and Ai' in long double; accurate for |x| <= 5.
struct AiSeries {
    long double ai, aip;
};

AiSeries ai_series(long double x) {
    const long double c1 = 1.0L / (std::cbrt(9.0L) * std::tgamma(2.0L / 3.0L));
    const long double c2 = 1.0L / (std::cbrt(3.0L) * std::tgamma(1.0L / 3.0L));
    long double f = 1, g = x, fp = 0, gp = 1;
    long double tf = 1, tg = x;
    const long double x3 = x * x * x;
    for (int n = 1; n < 200; ++n) {
        tf *= x3 / ((3.0L * n - 1) * (3.0L * n));
        tg *= x3 / ((3.0L * n) * (3.0L * n + 1));
        f += tf;
        g += tg;
        fp += tf * 3.0L * n / x;
        gp += tg * (3.0L * n + 1) / x;
        if (std::fabs(tf) + std::fabs(tg) < 1e-30L) break;
    }
    return {c1 * f - c2 * g, c1 * fp - c2 * gp};
}

}  // namespace

TEST_CASE("Airy function values at the origin") {
    const double ai0 = 1.0 / (std::cbrt(9.0) * std::tgamma(2.0 / 3.0));
    const double aip0 = -1.0 / (std::cbrt(3.0) * std::tgamma(1.0 / 3.0));
    CHECK(airy_ai(0.0) == doctest::Approx(ai0).epsilon(1e-13));
    CHECK(airy_ai_prime(0.0) == doctest::Approx(aip0).epsilon(1e-13));
}

TEST_CASE("Airy function agrees with the Maclaurin series") {
    for (double x = -5.0; x <= 3.0; x += 0.37) {
        const auto s = ai_series(x);
        CHECK(std::fabs(airy_ai(x) - static_cast<double>(s.ai)) <= 1e-11);
        CHECK(std::fabs(airy_ai_prime(x) - static_cast<double>(s.aip)) <= 1e-10);
    }
}

TEST_CASE("Airy function tail decays like the asymptotic form") {
    for (double x : {6.0, 10.0, 20.0}) {
        const double zeta = 2.0 / 3.0 * std::pow(x, 1.5);
        const double lead = std::exp(-zeta) / (2.0 * std::sqrt(std::numbers::pi) * std::pow(x, 0.25));
        CHECK(airy_ai(x) / lead == doctest::Approx(1.0 - 5.0 / (72.0 * zeta)).epsilon(2e-3));
    }
}

TEST_CASE("Airy zeros match tabulated values") {
    // Abramowitz and Stegun, table 10.13.
    CHECK(airy_zero(AiryKind::ZeroOfAi, 1) == doctest::Approx(-2.338107410459767).epsilon(1e-13));
    CHECK(airy_zero(AiryKind::ZeroOfAi, 2) == doctest::Approx(-4.087949444130970).epsilon(1e-13));
    CHECK(airy_zero(AiryKind::ZeroOfAi, 3) == doctest::Approx(-5.520559828095551).epsilon(1e-13));
    CHECK(airy_zero(AiryKind::ZeroOfAiPrime, 1) == doctest::Approx(-1.018792971647471).epsilon(1e-13));
    CHECK(airy_zero(AiryKind::ZeroOfAiPrime, 2) == doctest::Approx(-3.248197582179837).epsilon(1e-13));
}

TEST_CASE("Airy zeros are roots and decrease") {
    double prev = 0.0, prevp = 0.0;
    for (int j = 1; j <= 20; ++j) {
        const double z = airy_zero(AiryKind::ZeroOfAi, j), zp = airy_zero(AiryKind::ZeroOfAiPrime, j);
        CHECK(std::fabs(airy_ai(z)) < 1e-12);
        CHECK(std::fabs(airy_ai_prime(zp)) < 1e-11);
        CHECK(z < prev);
        CHECK(zp < prevp);
        CHECK(zp > z);  // interlacing: a'_j lies above a_j
        prev = z, prevp = zp;
    }
    CHECK_THROWS_AS(airy_zero(AiryKind::ZeroOfAi, 0), DomainError);
}

TEST_CASE("Airy normalization integrals match closed forms") {
    // int_z^inf Ai^2 = Ai'(z)^2 - z Ai(z)^2.
    for (int j = 1; j <= 2; ++j) {
        const double z = airy_zero(AiryKind::ZeroOfAi, j);
        const auto s = ai_series(z);
        CHECK(airy_moment(AiryKind::ZeroOfAi, j, 0) == doctest::Approx(static_cast<double>(s.aip * s.aip)).epsilon(1e-9));
        const double zp = airy_zero(AiryKind::ZeroOfAiPrime, j);
        const auto sp = ai_series(zp);
        CHECK(airy_moment(AiryKind::ZeroOfAiPrime, j, 0) ==
              doctest::Approx(static_cast<double>(-zp * sp.ai * sp.ai)).epsilon(1e-9));
    }
}

TEST_CASE("Fourth Airy moment against Simpson on the series") {
    for (auto kind : {AiryKind::ZeroOfAi, AiryKind::ZeroOfAiPrime}) {
        const double z = airy_zero(kind, 1);
        const int n = 6000;
        const double top = 7.0 - z, h = top / n;
        long double sum = 0;
        for (int i = 0; i <= n; ++i) {
            const double v = i * h;
            const long double a = ai_series(v + z).ai;
            const long double f = std::pow(static_cast<long double>(v), 4) * a * a;
            sum += f * ((i == 0 || i == n) ? 1 : (i % 2 ? 4 : 2));
        }
        const double simpson = static_cast<double>(sum * h / 3.0L);
        // Tail beyond v + z = 7 is below 1e-9 relative.
        CHECK(airy_moment(kind, 1, 4) == doctest::Approx(simpson).epsilon(1e-6));
        const auto c = airy_constants(kind, 1);
        CHECK(c.D == doctest::Approx(std::sqrt(airy_moment(kind, 1, 4) / c.c)).epsilon(1e-14));
    }
}

TEST_CASE("Hermite eigenfunctions are orthonormal and centred") {
    const double b = 2.5, k = 1.3;
    const auto rule = gauss_legendre(200, k / b - 8.0, k / b + 8.0);
    for (int i = 0; i < 6; ++i) {
        for (int j = 0; j < 6; ++j) {
            double s = 0.0;
            for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
                s += rule.weights[q] * hermite_eigenfunction(i, b, rule.nodes[q], k) *
                     hermite_eigenfunction(j, b, rule.nodes[q], k);
            }
            CHECK(s == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-11).scale(1.0));
        }
    }
    // Even/odd symmetry around the centre.
    CHECK(hermite_eigenfunction(2, b, k / b + 0.3, k) == doctest::Approx(hermite_eigenfunction(2, b, k / b - 0.3, k)));
    CHECK(hermite_eigenfunction(3, b, k / b + 0.3, k) == doctest::Approx(-hermite_eigenfunction(3, b, k / b - 0.3, k)));
}

TEST_CASE("Hermite eigenfunction satisfies the oscillator equation") {
    const double b = 1.7, k = -0.4, h = 1e-3;
    for (int j = 0; j < 5; ++j) {
        for (double x : {-1.0, -0.2, 0.5, 1.1}) {
            auto f = [&](double t) { return hermite_eigenfunction(j, b, t, k); };
            const double d2 = (f(x + h) - 2 * f(x) + f(x - h)) / (h * h);
            const double lhs = -d2 + (b * x - k) * (b * x - k) * f(x);
            CHECK(lhs == doctest::Approx((2 * j + 1) * b * f(x)).epsilon(1e-5).scale(1.0));
        }
    }
}

TEST_CASE("Gauss-Legendre is exact on polynomials of degree 2n-1") {
    for (int n : {1, 2, 5, 12}) {
        const auto r = gauss_legendre(n, -0.5, 2.0);
        for (int p = 0; p <= 2 * n - 1; ++p) {
            double s = 0.0;
            for (int i = 0; i < n; ++i) s += r.weights[i] * std::pow(r.nodes[i], p);
            const double exact = (std::pow(2.0, p + 1) - std::pow(-0.5, p + 1)) / (p + 1);
            CHECK(s == doctest::Approx(exact).epsilon(1e-13));
        }
    }
}

TEST_CASE("Adaptive quadrature") {
    CHECK(integrate([](double x) { return std::sin(x); }, 0.0, std::numbers::pi).value == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(integrate([](double x) { return std::sqrt(x); }, 0.0, 1.0).value == doctest::Approx(2.0 / 3.0).epsilon(1e-11));
    CHECK(integrate([](double x) { return std::exp(-x * x); }, -10.0, 10.0).value ==
          doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-13));
    CHECK_THROWS_AS(integrate([](double x) { return std::sin(1.0 / x); }, 1e-9, 1.0, 1e-14, 1e-16, 4),
                    NumericalError);
}

TEST_CASE("log_beta agrees with lgamma") {
    for (double a : {0.5, 1.5, 3.0}) {
        for (double c : {0.1, 0.5, 2.25}) {
            CHECK(log_beta(a, c) == doctest::Approx(std::lgamma(a) + std::lgamma(c) - std::lgamma(a + c)).epsilon(1e-13));
        }
    }
}

#include "magbar/localization.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "magbar/errors.hpp"
#include "magbar/parallel.hpp"

namespace magbar {

double turning_point(double k, double b, double omega) {
    if (!(b > 0.0)) throw DomainError("turning_point: b must be positive");
    if (omega < 0.0) throw DomainError("turning_point: omega must be nonnegative");
    return (std::max(k, 0.0) + std::sqrt(omega)) / b;
}

namespace {

double envelope(double b, double x, double x_n) {
    const double d = std::fabs(x) - x_n;
    return std::pow(2.0 * b / std::numbers::pi, 0.25) * std::exp(-0.5 * b * d * d);
}

// Integral of psi^2 over [a, c] within [0, L] from grid samples, exact for
// piecewise-linear psi^2 (trapezoid with partial end cells).
double mass_between(const EigenPair& pair, double a, double c) {
    const double h = pair.h;
    const std::size_t N = pair.psi.size() - 1;
    const double L = h * static_cast<double>(N);
    a = std::clamp(a, 0.0, L);
    c = std::clamp(c, 0.0, L);
    if (!(c > a)) return 0.0;
    auto f = [&](double x) {
        const double t = x / h;
        const std::size_t i = std::min(static_cast<std::size_t>(t), N - 1);
        const double u = t - static_cast<double>(i);
        const double p0 = pair.psi[i] * pair.psi[i], p1 = pair.psi[i + 1] * pair.psi[i + 1];
        return (1.0 - u) * p0 + u * p1;
    };
    const std::size_t ia = static_cast<std::size_t>(std::ceil(a / h));
    const std::size_t ic = static_cast<std::size_t>(std::floor(c / h));
    if (ia > ic) return 0.5 * (f(a) + f(c)) * (c - a);
    double s = 0.5 * (f(a) + f(ia * h)) * (ia * h - a) + 0.5 * (f(ic * h) + f(c)) * (c - ic * h);
    for (std::size_t i = ia; i < ic; ++i) {
        s += 0.5 * h * (pair.psi[i] * pair.psi[i] + pair.psi[i + 1] * pair.psi[i + 1]);
    }
    return s;
}

}  // namespace

LocalizationCheck envelope_check(const EigenPair& pair, double b, double k, double tol) {
    if (pair.psi.size() < 2) throw PreconditionError("envelope_check: empty eigenfunction");
    LocalizationCheck c;
    c.j = pair.j;
    c.k = k;
    c.b = b;
    c.x_n = turning_point(k, b, pair.omega);
    c.prefactor = std::pow(2.0 * b / std::numbers::pi, 0.25);
    const double h = pair.h;
    const std::size_t N = pair.psi.size() - 1;
    const double t = c.x_n / h;
    if (t >= static_cast<double>(N)) throw ResolutionError("envelope_check: x_n beyond the wall");
    const std::size_t i0 = static_cast<std::size_t>(t);
    const double u = t - static_cast<double>(i0);
    c.psi_at_xn = std::fabs((1.0 - u) * pair.psi[i0] + u * pair.psi[i0 + 1]);
    for (std::size_t i = 0; i <= N; ++i) {
        const double x = h * static_cast<double>(i);
        if (x < c.x_n) continue;
        c.max_ratio = std::max(c.max_ratio, std::fabs(pair.psi[i]) / envelope(b, x, c.x_n));
    }
    c.envelope_ok = c.max_ratio <= 1.0 + tol;
    return c;
}

std::vector<std::array<double, 3>> envelope_profile(const EigenPair& pair, double b, double k) {
    const double x_n = turning_point(k, b, pair.omega);
    std::vector<std::array<double, 3>> out;
    out.reserve(pair.psi.size());
    for (std::size_t i = 0; i < pair.psi.size(); ++i) {
        const double x = pair.h * static_cast<double>(i);
        out.push_back({x, std::fabs(pair.psi[i]), envelope(b, std::max(x, x_n), x_n)});
    }
    return out;
}

double tail_mass(const EigenPair& pair, double fraction) {
    const double L = pair.h * static_cast<double>(pair.psi.size() - 1);
    return 2.0 * mass_between(pair, fraction * L, L);
}

SplitMass split_mass(const EigenPair& pair, double r) {
    const double L = pair.h * static_cast<double>(pair.psi.size() - 1);
    return {2.0 * mass_between(pair, 0.0, r), 2.0 * mass_between(pair, r, L)};
}

FiberState normalized(const FiberState& state) {
    const double n2 = state.norm2();
    if (!(n2 > 0.0)) throw PreconditionError("normalized: zero state");
    FiberState out = state;
    const double s = 1.0 / std::sqrt(n2);
    for (auto& c : out.components) {
        for (auto& z : c.beta) z *= s;
    }
    return out;
}

StripMass strip_mass(const FiberState& state, const BandInterpolant& bands, double epsilon,
                     const FiberOptions& opt, double norm_tol) {
    const double b = bands.b();
    if (std::fabs(state.norm2() - 1.0) > norm_tol) throw PreconditionError("strip_mass: state is not normalized");
    for (std::size_t a = 0; a < state.components.size(); ++a) {
        for (std::size_t c = a + 1; c < state.components.size(); ++c) {
            const auto& A = state.components[a];
            const auto& C = state.components[c];
            const auto [alo, ahi] = std::minmax_element(A.k.begin(), A.k.end());
            const auto [clo, chi] = std::minmax_element(C.k.begin(), C.k.end());
            if (!(*ahi < *clo || *chi < *alo)) {
                throw PreconditionError("strip_mass: components overlap in k (cross terms not supported)");
            }
        }
    }
    StripMass s{std::pow(b, -0.5 + epsilon), 0.0, 0.0, 1.0 - std::sqrt(2.0) * std::exp(-std::pow(b, epsilon)), false};
    for (const auto& c : state.components) {
        std::vector<SplitMass> parts(c.k.size());
        parallel_for(c.k.size(), 0, [&](std::size_t i) { parts[i] = split_mass(band_pair(b, c.k[i], c.j, opt), s.radius); });
        for (std::size_t i = 0; i < c.k.size(); ++i) {
            const double w = c.weight[i] * std::norm(c.beta[i]);
            s.inside += w * parts[i].inside;
            s.outside += w * parts[i].outside;
        }
    }
    s.pass = s.inside >= s.bound;
    return s;
}

ThresholdScan strip_threshold_scan(int n, double epsilon, const std::vector<double>& bs, int states,
                                   std::uint64_t seed, unsigned jobs) {
    ThresholdScan scan;
    scan.bs = bs;
    TraceOptions topt;
    topt.jobs = jobs;
    for (double b : bs) {
        const auto bands = window_bands(n, b, 96, topt);
        const double E = 0.5 * (landau_level(n, b) + bands.records().at(n).energy);
        const auto report = mourre_constant(n, E, working_delta0(n, E, bands), bands);
        int fails = 0;
        double worst = std::numeric_limits<double>::infinity();
        for (int s = 0; s < states; ++s) {
            const auto st = normalized(random_fiber_state(report, bands, seed + static_cast<std::uint64_t>(s)));
            const auto m = strip_mass(st, bands, epsilon);
            if (!m.pass) ++fails;
            worst = std::min(worst, m.inside - m.bound);
        }
        scan.failures.push_back(fails);
        scan.worst.push_back(worst);
    }
    scan.b_tilde = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t i = bs.size(); i-- > 0;) {
        if (scan.failures[i] != 0) break;
        scan.b_tilde = bs[i];
    }
    return scan;
}

}  // namespace magbar

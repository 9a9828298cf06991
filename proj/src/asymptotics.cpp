#include "magbar/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "magbar/errors.hpp"

namespace magbar {

namespace {

specfun::AiryKind kind_of_band(int j) {
    return parity_of_band(j) == Parity::Even ? specfun::AiryKind::ZeroOfAiPrime
                                             : specfun::AiryKind::ZeroOfAi;
}

void require_negative_k(double b, double k) {
    if (!(b > 0.0)) throw DomainError("airy: b must be positive");
    if (!(k < 0.0)) throw DomainError("airy: wave number must be negative");
}

double predicted_level(double b, double k, int j) {
    const double z = specfun::airy_zero(kind_of_band(j), ordinal_of_band(j));
    return k * k - std::pow(2.0 * b * std::fabs(k), 2.0 / 3.0) * z;
}

}  // namespace

AiryPrediction airy_prediction(double b, double k, int j) {
    require_negative_k(b, k);
    if (j < 1) throw DomainError("airy_prediction: band index must be positive");
    AiryPrediction p;
    p.j = j;
    p.k = k;
    p.constants = specfun::airy_constants(kind_of_band(j), ordinal_of_band(j));
    p.predicted = predicted_level(b, k, j);
    p.bound = p.constants.D * std::pow(b, 4.0 / 3.0) / std::pow(2.0 * std::fabs(k), 2.0 / 3.0);
    return p;
}

AiryCheck airy_check(double b, double k, int j, const FiberOptions& opt) {
    AiryCheck c;
    c.prediction = airy_prediction(b, k, j);
    double spacing = predicted_level(b, k, j + 1) - c.prediction.predicted;
    if (j > 1) spacing = std::min(spacing, c.prediction.predicted - predicted_level(b, k, j - 1));
    if (!(c.prediction.bound < spacing)) {
        std::ostringstream msg;
        msg << "airy_check: |k|=" << std::fabs(k) << " too small, bound exceeds level spacing";
        throw PreconditionError(msg.str());
    }
    c.omega = band_pair(b, k, j, opt).omega;
    c.measured_error = std::fabs(c.omega - c.prediction.predicted);
    c.bound = c.prediction.bound;
    c.pass = c.measured_error <= c.bound;
    return c;
}

double airy_quasimode(double b, double k, int j, double x) {
    require_negative_k(b, k);
    const auto kind = kind_of_band(j);
    const double z = specfun::airy_zero(kind, ordinal_of_band(j));
    const double c = specfun::airy_moment(kind, ordinal_of_band(j), 0);
    const double s = std::cbrt(2.0 * b * std::fabs(k));
    const double norm = std::sqrt(s / (2.0 * c));
    const double v = norm * specfun::airy_ai(s * std::fabs(x) + z);
    return (parity_of_band(j) == Parity::Odd && x < 0.0) ? -v : v;
}

AiryResidual airy_residual(double b, double k, int j) {
    const auto pred = airy_prediction(b, k, j);
    const double z = pred.constants.z;
    const double s = std::cbrt(2.0 * b * std::fabs(k));
    const double amp = std::sqrt(s / (2.0 * pred.constants.c));

    // On x >= 0 (the odd extension has the same modulus), with t = s x + z:
    // -Psi'' = -s^2 t Psi, so (h - prediction) Psi is an explicit expression.
    auto psi = [&](double x) { return amp * specfun::airy_ai(s * x + z); };
    auto applied = [&](double x) {
        const double t = s * x + z;
        const double p = psi(x);
        return -s * s * t * p + effective_potential(b, k, x) * p - pred.predicted * p;
    };
    auto multiplier = [&](double x) { return b * b * x * x * psi(x); };

    double upper = (-z + 1.0) / s;
    while (std::fabs(multiplier(upper)) > 1e-16 || s * upper + z < 2.0) upper += 0.25 / s;

    AiryResidual r;
    r.identity_gap = 0.0;
    for (int i = 0; i <= 2000; ++i) {
        const double x = upper * i / 2000.0;
        r.identity_gap = std::max(r.identity_gap, std::fabs(applied(x) - multiplier(x)));
    }
    auto sq = [](auto f) { return [f](double x) { const double v = f(x); return v * v; }; };
    const double n2 = 2.0 * specfun::integrate(sq(psi), 0.0, upper, 1e-12, 1e-16).value;
    const double r2 = 2.0 * specfun::integrate(sq(applied), 0.0, upper, 1e-12, 1e-16).value;
    const double m2 = 2.0 * specfun::integrate(sq(multiplier), 0.0, upper, 1e-12, 1e-16).value;
    r.norm = std::sqrt(n2);
    r.residual = std::sqrt(r2);
    r.multiplier = std::sqrt(m2);
    r.bound = pred.bound;
    if (std::fabs(r.norm - 1.0) > 1e-6) throw NumericalError("airy_residual: quasimode normalization off");
    return r;
}

namespace {

// Derivative of the oscillator eigenfunction with index n.
double hermite_derivative(int n, double b, double x, double k) {
    double d = -std::sqrt((n + 1.0) / 2.0) * specfun::hermite_eigenfunction(n + 1, b, x, k);
    if (n > 0) d += std::sqrt(n / 2.0) * specfun::hermite_eigenfunction(n - 1, b, x, k);
    return std::sqrt(b) * d;
}

// (omega - level) from the half-line Green identity against Phi.
double wronskian_gap(const EigenPair& e, double b, double k, int n) {
    const double phi0 = specfun::hermite_eigenfunction(n, b, 0.0, k);
    const double dphi0 = hermite_derivative(n, b, 0.0, k);
    double overlap = 0.5 * e.psi[0] * phi0;
    for (std::size_t i = 1; i < e.psi.size(); ++i) {
        overlap += e.psi[i] * specfun::hermite_eigenfunction(n, b, e.h * i, k);
    }
    overlap *= e.h;
    return (phi0 * e.dpsi0 - e.psi0 * dphi0) / overlap;
}

}  // namespace

HOCheck ho_check(double b, double k, int j, const FiberOptions& opt) {
    if (!(b > 0.0)) throw DomainError("ho_check: b must be positive");
    if (j < 1) throw DomainError("ho_check: pair index must be positive");
    HOCheck c;
    c.level = landau_level(j, b);
    const auto plus = solve_levels(b, k, Parity::Even, j, opt).back();
    const auto minus = solve_levels(b, k, Parity::Odd, j, opt).back();
    c.gap_plus = -wronskian_gap(plus, b, k, j - 1);
    c.gap_minus = wronskian_gap(minus, b, k, j - 1);
    c.gap_plus_direct = c.level - plus.omega;
    c.gap_minus_direct = minus.omega - c.level;
    c.pass = c.gap_plus > 0.0 && c.gap_minus > 0.0;
    return c;
}

namespace {

double discrete_splitting(const EigenPair& even, const EigenPair& odd) {
    double s = 0.0;
    for (std::size_t i = 1; i < even.psi.size(); ++i) s += even.psi[i] * odd.psi[i];
    return even.psi[0] * odd.psi[1] / (even.h * even.h * s);
}

}  // namespace

double splitting(double b, double k, int j, const FiberOptions& opt) {
    if (j < 1) throw DomainError("splitting: pair index must be positive");
    FiberProblem odd = build_problem(b, k, Parity::Odd, j, opt);
    FiberProblem even = odd;
    even.parity = Parity::Even;
    auto on = [&](int factor) {
        const auto e = solve(refined(even, factor), j).back();
        const auto o = solve(refined(odd, factor), j).back();
        return discrete_splitting(e, o);
    };
    const double coarse = on(1);
    if (!opt.richardson) return coarse;
    return (4.0 * on(2) - coarse) / 3.0;
}

SplittingFit splitting_fit(double b, int j, const std::vector<double>& k_samples, const FiberOptions& opt) {
    if (k_samples.size() < 2) throw DomainError("splitting_fit: need at least two samples");
    SplittingFit f;
    f.ks = k_samples;
    f.nonnegative = true;
    f.fitted_C = 0.0;
    std::vector<double> x, y;
    for (double k : k_samples) {
        const double s = splitting(b, k, j, opt);
        f.splittings.push_back(s);
        if (!(s >= 0.0)) f.nonnegative = false;
        if (s > 0.0 && std::isfinite(s)) {
            x.push_back(k * k / b);
            y.push_back(std::log(s));
            f.fitted_C = std::max(f.fitted_C, s / (2.0 * b * std::exp(-k * k / (4.0 * b))));
        }
    }
    if (x.size() < 2) throw ResolutionError("splitting_fit: splitting below floating-point floor; use smaller k");
    f.fit = linear_fit(x, y);
    f.rate = f.fit.slope;
    f.pass = f.nonnegative && f.rate <= -0.25 + 0.05;
    return f;
}

}  // namespace magbar

#include "magbar/specfun.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <queue>
#include <sstream>
#include <vector>

#include "magbar/errors.hpp"

namespace magbar::specfun {

namespace {

constexpr long double kAi0 = 0.355028053887817239260063186004183176L;
constexpr long double kAiPrime0 = -0.258819403792806798405183560189203963L;

// Series switch points; both expansions agree to better than 1e-13 there.
constexpr double kSeriesMaxPositive = 6.0;
constexpr double kSeriesMaxNegative = 8.0;
constexpr double kMinArgument = -1e6;

struct AiPair {
    double ai;
    double dai;
};

AiPair maclaurin(double xd) {
    const long double x = xd;
    const long double x3 = x * x * x;
    // Ai = Ai(0) f + Ai'(0) g with f, g the two power series solutions.
    long double f = 1.0L, g = x, df = 0.0L, dg = 1.0L;
    long double tf = 1.0L, tg = x, tdf = x * x / 2.0L, tdg = 1.0L;
    df = tdf;
    for (int k = 1; k < 400; ++k) {
        const long double kk = 3.0L * k;
        tf *= x3 / ((kk - 1.0L) * kk);
        tg *= x3 / (kk * (kk + 1.0L));
        tdg *= x3 / ((kk - 2.0L) * kk);
        f += tf;
        g += tg;
        dg += tdg;
        if (k >= 2) {
            tdf *= x3 / ((kk - 3.0L) * (kk - 1.0L));
            df += tdf;
        }
        const long double scale = std::fabs(f) + std::fabs(g) + std::fabs(df) + std::fabs(dg);
        if (k > 4 && std::fabs(tf) + std::fabs(tg) + std::fabs(tdf) + std::fabs(tdg) <
                         1e-24L * scale) {
            break;
        }
    }
    return {static_cast<double>(kAi0 * f + kAiPrime0 * g),
            static_cast<double>(kAi0 * df + kAiPrime0 * dg)};
}

// Coefficients u_k of the standard large-argument expansions.
const std::array<double, 40>& u_coeffs() {
    static const std::array<double, 40> u = [] {
        std::array<double, 40> c{};
        c[0] = 1.0;
        for (int k = 1; k < 40; ++k) {
            c[k] = c[k - 1] * (6.0 * k - 5.0) * (6.0 * k - 3.0) * (6.0 * k - 1.0) /
                   ((2.0 * k - 1.0) * 216.0 * k);
        }
        return c;
    }();
    return u;
}

double v_coeff(int k) {
    const auto& u = u_coeffs();
    return k == 0 ? 1.0 : -(6.0 * k + 1.0) / (6.0 * k - 1.0) * u[k];
}

AiPair asymptotic_positive(double x) {
    const auto& u = u_coeffs();
    const double zeta = 2.0 / 3.0 * x * std::sqrt(x);
    double su = 0.0, sv = 0.0, p = 1.0, last = INFINITY;
    for (int k = 0; k < 40; ++k) {
        const double tu = u[k] * p;
        if (std::fabs(tu) > last) break;
        last = std::fabs(tu);
        const double sign = (k % 2 == 0) ? 1.0 : -1.0;
        su += sign * tu;
        sv += sign * v_coeff(k) * p;
        if (last < 1e-18) break;
        p /= zeta;
    }
    const double pref = std::exp(-zeta) / (2.0 * std::sqrt(std::numbers::pi));
    const double q = std::pow(x, 0.25);
    return {pref / q * su, -pref * q * sv};
}

AiPair asymptotic_negative(double x) {
    const auto& u = u_coeffs();
    const double z = -x;
    const double zeta = 2.0 / 3.0 * z * std::sqrt(z);
    double pe = 0.0, po = 0.0, qe = 0.0, qo = 0.0;
    double p = 1.0, last = INFINITY;
    for (int k = 0; k < 40; ++k) {
        const double t = u[k] * p;
        if (std::fabs(t) > last) break;
        last = std::fabs(t);
        // (-1)^floor(k/2) sign pattern of the even/odd subseries.
        const double sign = ((k / 2) % 2 == 0) ? 1.0 : -1.0;
        if (k % 2 == 0) {
            pe += sign * t;
            qe += sign * v_coeff(k) * p;
        } else {
            po += sign * t;
            qo += sign * v_coeff(k) * p;
        }
        if (last < 1e-18) break;
        p /= zeta;
    }
    const double phase = zeta - std::numbers::pi / 4.0;
    const double c = std::cos(phase), s = std::sin(phase);
    const double rpi = std::sqrt(std::numbers::pi);
    const double q = std::pow(z, 0.25);
    return {(c * pe + s * po) / (rpi * q), q * (s * qe - c * qo) / rpi};
}

AiPair airy_pair(double x) {
    if (!std::isfinite(x) || x < kMinArgument) {
        throw DomainError("airy: argument outside supported range");
    }
    if (x > kSeriesMaxPositive) return asymptotic_positive(x);
    if (x < -kSeriesMaxNegative) return asymptotic_negative(x);
    return maclaurin(x);
}

}  // namespace

double airy_ai(double x) { return airy_pair(x).ai; }

double airy_ai_prime(double x) { return airy_pair(x).dai; }

double airy_zero(AiryKind kind, int j) {
    if (j < 1) throw DomainError("airy_zero: index must be positive");
    if (j > kMaxAiryZero) throw CapabilityError("airy_zero: index beyond supported maximum");
    const bool of_ai = kind == AiryKind::ZeroOfAi;
    const double t = 3.0 * std::numbers::pi * (4.0 * j - (of_ai ? 1.0 : 3.0)) / 8.0;
    const double t2 = 1.0 / (t * t);
    const double guess = of_ai ? -std::pow(t, 2.0 / 3.0) * (1.0 + 5.0 / 48.0 * t2 - 5.0 / 36.0 * t2 * t2)
                               : -std::pow(t, 2.0 / 3.0) * (1.0 - 7.0 / 48.0 * t2 + 35.0 / 288.0 * t2 * t2);

    auto value = [&](double x) { return of_ai ? airy_ai(x) : airy_ai_prime(x); };
    auto slope = [&](double x) { return of_ai ? airy_ai_prime(x) : x * airy_ai(x); };

    const double w = 0.3 * std::numbers::pi / std::sqrt(std::max(1.0, std::fabs(guess)));
    double lo = guess - w, hi = guess + w;
    double flo = value(lo), fhi = value(hi);
    if (flo * fhi > 0.0) throw NumericalError("airy_zero: initial bracket has no sign change");

    double x = guess;
    for (int it = 0; it < 100; ++it) {
        const double fx = value(x);
        if (fx == 0.0) return x;
        if ((fx < 0.0) == (flo < 0.0)) {
            lo = x;
            flo = fx;
        } else {
            hi = x;
        }
        double next = x - fx / slope(x);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::fabs(next - x) <= 1e-15 * std::fabs(x)) {
            x = next;
            break;
        }
        x = next;
    }
    if (std::fabs(value(x)) >= 1e-12) throw NumericalError("airy_zero: Newton did not converge");
    return x;
}

double airy_moment(AiryKind kind, int j, int power) {
    if (power != 0 && power != 4) throw DomainError("airy_moment: power must be 0 or 4");
    const double z = airy_zero(kind, j);
    auto integrand = [&](double v) {
        const double a = airy_ai(v + z);
        return (power == 0 ? 1.0 : v * v * v * v) * a * a;
    };
    // Truncate where the integrand drops below 1e-18 beyond the last zero.
    double upper = -z + 1.0;
    while (integrand(upper) > 1e-18 || upper + z < 2.0) upper += 0.5;

    // Split at the interior zeros so each panel carries a single lobe.
    std::vector<double> cuts{0.0};
    for (int i = 1; i < j; ++i) cuts.push_back(airy_zero(kind, i) - z);
    std::sort(cuts.begin(), cuts.end());
    cuts.push_back(upper);
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        total += integrate(integrand, cuts[i], cuts[i + 1], 1e-13, 1e-16).value;
    }
    return total;
}

AiryConstants airy_constants(AiryKind kind, int j) {
    const double c = airy_moment(kind, j, 0);
    const double m4 = airy_moment(kind, j, 4);
    return {kind, j, airy_zero(kind, j), c, std::sqrt(m4 / c)};
}

double hermite_eigenfunction(int j, double b, double x, double k) {
    if (j < 0) throw DomainError("hermite_eigenfunction: negative index");
    if (j > kMaxHermiteIndex) throw CapabilityError("hermite_eigenfunction: index above 60");
    if (!(b > 0.0)) throw DomainError("hermite_eigenfunction: b must be positive");
    const double t = std::sqrt(b) * (x - k / b);
    // Normalized recurrence; the Gaussian factor is applied at the end in
    // log space together with any rescaling of the polynomial part.
    double prev = 0.0;
    double cur = std::pow(std::numbers::pi, -0.25);
    double log_scale = -0.5 * t * t;
    for (int n = 0; n < j; ++n) {
        const double next = std::sqrt(2.0 / (n + 1.0)) * t * cur - std::sqrt(n / (n + 1.0)) * prev;
        prev = cur;
        cur = next;
        if (std::fabs(cur) > 1e150) {
            cur *= 1e-150;
            prev *= 1e-150;
            log_scale += 150.0 * std::log(10.0);
        }
    }
    if (cur == 0.0) return 0.0;
    const double mag = std::log(std::fabs(cur)) + log_scale + 0.25 * std::log(b);
    return std::copysign(std::exp(mag), cur);
}

double log_beta(double a, double b) {
    if (!(a > 0.0) || !(b > 0.0)) throw DomainError("log_beta: arguments must be positive");
    return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

namespace {

constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double a, b, value, error;
    bool operator<(const Panel& o) const { return error < o.error; }
};

Panel gk15(const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    const double fc = f(c);
    double kron = fc * kWgk[7];
    double gauss = fc * kWg[3];
    for (int i = 0; i < 7; ++i) {
        const double dx = h * kXgk[i];
        const double s = f(c - dx) + f(c + dx);
        kron += kWgk[i] * s;
        if (i % 2 == 1) gauss += kWg[i / 2] * s;
    }
    return {a, b, kron * h, std::fabs((kron - gauss) * h)};
}

}  // namespace

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           double rel_tol, double abs_tol, int max_intervals) {
    std::priority_queue<Panel> heap;
    const Panel first = gk15(f, a, b);
    heap.push(first);
    double value = first.value, error = first.error;
    int count = 1;
    while (error > std::max(abs_tol, rel_tol * std::fabs(value))) {
        if (count >= max_intervals) {
            std::ostringstream msg;
            msg << "integrate: tolerance not met, achieved error " << error;
            throw NumericalError(msg.str());
        }
        const Panel worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        const Panel left = gk15(f, worst.a, mid);
        const Panel right = gk15(f, mid, worst.b);
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++count;
    }
    // Re-sum to avoid drift from the incremental updates.
    double sum = 0.0, err = 0.0;
    while (!heap.empty()) {
        sum += heap.top().value;
        err += heap.top().error;
        heap.pop();
    }
    return {sum, err, count};
}

GaussRule gauss_legendre(int n, double a, double b) {
    if (n < 1) throw DomainError("gauss_legendre: need at least one node");
    GaussRule r;
    r.nodes.resize(n);
    r.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 1.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::fabs(dx) < 1e-16) break;
        }
        r.nodes[n - 1 - i] = 0.5 * (a + b) + 0.5 * (b - a) * x;
        r.weights[n - 1 - i] = (b - a) / ((1.0 - x * x) * dp * dp);
    }
    return r;
}

}  // namespace magbar::specfun

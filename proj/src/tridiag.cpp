#include "magbar/tridiag.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "magbar/errors.hpp"

namespace magbar {

std::size_t sturm_count(const SymTridiag& t, double x) {
    const std::size_t n = t.size();
    if (n == 0) return 0;
    const double tiny = std::numeric_limits<double>::min() * 1e10;
    std::size_t count = 0;
    double q = t.d[0] - x;
    for (std::size_t i = 0;; ++i) {
        if (std::fabs(q) < tiny) q = -tiny;
        if (q < 0.0) ++count;
        if (i + 1 == n) break;
        q = t.d[i + 1] - x - t.e[i] * t.e[i] / q;
    }
    return count;
}

void gershgorin(const SymTridiag& t, double& lo, double& hi) {
    const std::size_t n = t.size();
    lo = INFINITY;
    hi = -INFINITY;
    for (std::size_t i = 0; i < n; ++i) {
        double r = 0.0;
        if (i > 0) r += std::fabs(t.e[i - 1]);
        if (i + 1 < n) r += std::fabs(t.e[i]);
        lo = std::min(lo, t.d[i] - r);
        hi = std::max(hi, t.d[i] + r);
    }
}

double bisect_eigenvalue(const SymTridiag& t, std::size_t index, double lo, double hi) {
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (sturm_count(t, mid) > index) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return 0.5 * (lo + hi);
}

std::vector<double> lowest_eigenvalues(const SymTridiag& t, std::size_t n) {
    if (n > t.size()) throw ConfigurationError("lowest_eigenvalues: more levels than unknowns");
    double glo, ghi;
    gershgorin(t, glo, ghi);
    std::vector<double> out(n);
    double lo = glo;
    for (std::size_t i = 0; i < n; ++i) {
        // Shrink the upper end: first point with more than i eigenvalues below.
        double hi = ghi;
        out[i] = bisect_eigenvalue(t, i, lo, hi);
        lo = out[i];
    }
    for (std::size_t i = 0; i < n; ++i) {
        const double step = 64.0 * std::numeric_limits<double>::epsilon() *
                            std::max(std::fabs(glo), std::fabs(ghi));
        if (sturm_count(t, out[i] - step) > i || sturm_count(t, out[i] + step) < i + 1) {
            throw NumericalError("lowest_eigenvalues: Sturm count mismatch after bisection");
        }
        if (i > 0 && !(out[i] > out[i - 1])) {
            throw NumericalError("lowest_eigenvalues: eigenvalues not strictly increasing");
        }
    }
    return out;
}

std::vector<double> tridiag_solve(const SymTridiag& t, double shift, std::vector<double> rhs) {
    const std::size_t n = t.size();
    // Row i holds (a, b, c) = entries in columns i, i+1, i+2 after elimination.
    std::vector<double> a(n), b(n, 0.0), c(n, 0.0);
    std::vector<double> sub(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        a[i] = t.d[i] - shift;
        if (i + 1 < n) {
            b[i] = t.e[i];
            sub[i] = t.e[i];  // entry (i+1, i)
        }
    }
    const double tiny = std::numeric_limits<double>::epsilon() * 1e-8;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        // Current pivot row i: (a[i], b[i], c[i]); next row: (sub[i], a[i+1], b[i+1]).
        if (std::fabs(sub[i]) > std::fabs(a[i])) {
            std::swap(a[i], sub[i]);
            std::swap(b[i], a[i + 1]);
            std::swap(c[i], b[i + 1]);
            std::swap(rhs[i], rhs[i + 1]);
        }
        if (a[i] == 0.0) a[i] = tiny;
        const double m = sub[i] / a[i];
        a[i + 1] -= m * b[i];
        b[i + 1] -= m * c[i];
        rhs[i + 1] -= m * rhs[i];
    }
    if (a[n - 1] == 0.0) a[n - 1] = tiny;
    std::vector<double> x(n);
    for (std::size_t ii = n; ii-- > 0;) {
        double s = rhs[ii];
        if (ii + 1 < n) s -= b[ii] * x[ii + 1];
        if (ii + 2 < n) s -= c[ii] * x[ii + 2];
        x[ii] = s / a[ii];
    }
    return x;
}

std::vector<double> tridiag_apply(const SymTridiag& t, const std::vector<double>& x) {
    const std::size_t n = t.size();
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = t.d[i] * x[i];
        if (i > 0) s += t.e[i - 1] * x[i - 1];
        if (i + 1 < n) s += t.e[i] * x[i + 1];
        y[i] = s;
    }
    return y;
}

namespace {

void normalize(std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    s = std::sqrt(s);
    if (!(s > 0.0) || !std::isfinite(s)) throw NumericalError("inverse_iteration: degenerate iterate");
    for (double& x : v) x /= s;
}

}  // namespace

std::vector<double> inverse_iteration(const SymTridiag& t, double lambda, int iterations) {
    const std::size_t n = t.size();
    // Smooth deterministic start vector with no special symmetry.
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = 1.0 + 0.5 * std::sin(0.7 * i + 0.3);
    normalize(v);
    for (int it = 0; it < iterations; ++it) {
        v = tridiag_solve(t, lambda, std::move(v));
        normalize(v);
    }
    // Residual check relative to the matrix scale.
    double lo, hi;
    gershgorin(t, lo, hi);
    const auto tv = tridiag_apply(t, v);
    double r = 0.0;
    for (std::size_t i = 0; i < n; ++i) r += (tv[i] - lambda * v[i]) * (tv[i] - lambda * v[i]);
    r = std::sqrt(r);
    if (!(r <= 1e-9 * std::max(std::fabs(lo), std::fabs(hi)))) {
        throw NumericalError("inverse_iteration: residual did not converge");
    }
    return v;
}

}  // namespace magbar

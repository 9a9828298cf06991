#pragma once

// Independent reference computations for the tests. Nothing here calls the
// library: band values come from Numerov shooting with node counting, which
// shares no code path with the tridiagonal solver.

#include <cmath>
#include <functional>
#include <utility>

namespace oracle {

// Number of sign changes of the solution of -psi'' + (k - x)^2 psi = w psi on
// (0, X], started with Neumann (even) or Dirichlet (odd) data at x = 0.
inline int shoot_nodes(double k, bool even, double w, double step = 2e-4) {
    const double X = std::max(k, 0.0) + std::sqrt(std::max(w, 0.0)) + 8.0;
    const int n = static_cast<int>(std::ceil(X / step));
    const double h = X / n, h2 = h * h / 12.0;
    auto g = [&](double x) { return (k - x) * (k - x) - w; };
    // Second starting value from a Taylor expansion at the origin.
    double y0, y1;
    if (even) {
        const double g0 = g(0.0), g0p = -2.0 * k;
        y0 = 1.0;
        y1 = 1.0 + 0.5 * g0 * h * h + g0p * h * h * h / 6.0 + (g0 * g0 + 2.0) * std::pow(h, 4) / 24.0;
    } else {
        const double g0 = g(0.0);
        y0 = 0.0;
        y1 = h + g0 * h * h * h / 6.0 + (-2.0 * k) * 2.0 * std::pow(h, 4) / 24.0;
    }
    int nodes = 0;
    double ym = y0, y = y1;
    for (int i = 1; i < n; ++i) {
        const double xm = (i - 1) * h, x = i * h, xp = (i + 1) * h;
        const double yp = (2.0 * y * (1.0 + 5.0 * h2 * g(x)) - ym * (1.0 - h2 * g(xm))) / (1.0 - h2 * g(xp));
        if ((yp < 0.0) != (y < 0.0) && yp != 0.0) ++nodes;
        ym = y;
        y = yp;
        if (std::fabs(y) > 1e100) {
            ym *= 1e-100;
            y *= 1e-100;
        }
    }
    return nodes;
}

// m-th eigenvalue (m >= 1) of the parity class at b = 1.
inline double band_b1(double k, bool even, int m, double tol = 1e-11) {
    double lo = (k > 0.0 ? 0.0 : k * k), hi = lo + 4.0 * m + 4.0;
    while (shoot_nodes(k, even, hi) < m) hi *= 2.0;
    while (hi - lo > tol * std::max(1.0, hi)) {
        const double mid = 0.5 * (lo + hi);
        (shoot_nodes(k, even, mid) >= m ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
}

// Global band j (odd j even parity) for field b, by the scaling law.
inline double band(double b, double k, int j) {
    return b * band_b1(k / std::sqrt(b), j % 2 == 1, (j + 1) / 2);
}

// Golden-section minimum of f on [a, c].
inline std::pair<double, double> golden_min(const std::function<double(double)>& f, double a, double c,
                                            double tol = 1e-9) {
    const double r = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = c - r * (c - a), x2 = a + r * (c - a);
    double f1 = f(x1), f2 = f(x2);
    while (c - a > tol) {
        if (f1 < f2) {
            c = x2, x2 = x1, f2 = f1, x1 = c - r * (c - a), f1 = f(x1);
        } else {
            a = x1, x1 = x2, f1 = f2, x2 = a + r * (c - a), f2 = f(x2);
        }
    }
    const double x = 0.5 * (a + c);
    return {x, f(x)};
}

}  // namespace oracle

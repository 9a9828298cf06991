#include "magbar/bands.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "magbar/errors.hpp"
#include "magbar/parallel.hpp"

namespace magbar {

namespace {

double richardson(double coarse, double fine) { return (4.0 * fine - coarse) / 3.0; }

std::vector<BandSample> parity_samples(double b, double k, Parity parity, int m,
                                       const FiberOptions& opt) {
    const auto r = solve_levels_full(b, k, parity, m, opt);
    std::vector<BandSample> out(m);
    for (int i = 0; i < m; ++i) {
        const auto& e = r.extrapolated[i];
        BandSample s;
        s.k = k;
        s.omega = e.omega;
        s.psi0 = e.psi0;
        s.dpsi0 = e.dpsi0;
        s.domega_bd = derivative_boundary(e, b, k);
        const double fc = derivative_fh(r.coarse[i], b, k);
        const double ff = derivative_fh(r.fine[i], b, k);
        s.domega_fh = opt.richardson ? richardson(fc, ff) : ff;
        out[i] = s;
    }
    return out;
}

double median(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::nth_element(v.begin(), v.begin() + v.size() / 2, v.end());
    return v[v.size() / 2];
}

}  // namespace

double derivative_fh(const EigenPair& pair, double b, double k) {
    const auto& y = pair.psi;
    double s = 0.5 * k * y[0] * y[0];
    for (std::size_t i = 1; i < y.size(); ++i) s += (k - b * pair.h * i) * y[i] * y[i];
    return 4.0 * pair.h * s;
}

double derivative_boundary(const EigenPair& pair, double b, double k) {
    return -2.0 / b * ((pair.omega - k * k) * pair.psi0 * pair.psi0 + pair.dpsi0 * pair.dpsi0);
}

std::vector<BandSample> sample_bands(double b, double k, int n_bands, const FiberOptions& opt) {
    const int n_even = (n_bands + 1) / 2, n_odd = n_bands / 2;
    const auto even = parity_samples(b, k, Parity::Even, n_even, opt);
    std::vector<BandSample> odd;
    if (n_odd > 0) odd = parity_samples(b, k, Parity::Odd, n_odd, opt);
    std::vector<BandSample> out;
    for (int j = 1; j <= n_bands; ++j) {
        const auto& s = (j % 2 == 1) ? even[(j - 1) / 2] : odd[j / 2 - 1];
        // Pairs merge exponentially fast for k >> 0; below the solver's noise
        // floor the order is not resolvable and is not an error.
        const double floor = 1e-9 * std::max({1.0, std::fabs(s.omega), b});
        if (!out.empty() && s.omega < out.back().omega - floor) {
            std::ostringstream msg;
            msg << "sample_bands: band order violated at j=" << j << ", k=" << k;
            throw InvariantViolation(msg.str());
        }
        out.push_back(s);
    }
    return out;
}

BandTable trace(double b, double k_min, double k_max, int n_bands, int base_samples,
                const TraceOptions& opt) {
    if (!(b > 0.0)) throw DomainError("trace: b must be positive");
    if (n_bands < 1) throw DomainError("trace: need at least one band");
    if (k_min > k_max) throw DomainError("trace: k_min must not exceed k_max");

    std::vector<double> ks;
    if (k_min == k_max || base_samples <= 1) {
        ks.push_back(k_min);
    } else {
        for (int i = 0; i < base_samples; ++i) {
            ks.push_back(k_min + (k_max - k_min) * i / (base_samples - 1));
        }
    }

    std::vector<std::vector<BandSample>> rows;
    auto compute = [&](const std::vector<double>& pts) {
        std::vector<std::vector<BandSample>> out(pts.size());
        parallel_for(pts.size(), opt.jobs,
                     [&](std::size_t i) { out[i] = sample_bands(b, pts[i], n_bands, opt.fiber); });
        return out;
    };
    rows = compute(ks);

    for (int level = 0; level < opt.refinement_levels && ks.size() >= 3; ++level) {
        // Curvature indicator: second divided difference, max over bands.
        std::vector<double> curv(ks.size(), 0.0);
        for (std::size_t i = 1; i + 1 < ks.size(); ++i) {
            const double h1 = ks[i] - ks[i - 1], h2 = ks[i + 1] - ks[i];
            for (int j = 0; j < n_bands; ++j) {
                const double d1 = (rows[i][j].omega - rows[i - 1][j].omega) / h1;
                const double d2 = (rows[i + 1][j].omega - rows[i][j].omega) / h2;
                curv[i] = std::max(curv[i], std::fabs(2.0 * (d2 - d1) / (h1 + h2)));
            }
        }
        const double med = median(std::vector<double>(curv.begin() + 1, curv.end() - 1));
        std::vector<double> extra;
        for (std::size_t i = 1; i + 1 < ks.size(); ++i) {
            if (curv[i] > opt.refinement_factor * med) {
                extra.push_back(0.5 * (ks[i - 1] + ks[i]));
                extra.push_back(0.5 * (ks[i] + ks[i + 1]));
            }
        }
        std::sort(extra.begin(), extra.end());
        extra.erase(std::unique(extra.begin(), extra.end()), extra.end());
        if (extra.empty()) break;
        auto extra_rows = compute(extra);
        std::vector<double> merged_k;
        std::vector<std::vector<BandSample>> merged_rows;
        std::size_t a = 0, c = 0;
        while (a < ks.size() || c < extra.size()) {
            if (c >= extra.size() || (a < ks.size() && ks[a] < extra[c])) {
                merged_k.push_back(ks[a]);
                merged_rows.push_back(std::move(rows[a++]));
            } else if (a < ks.size() && ks[a] == extra[c]) {
                ++c;
            } else {
                merged_k.push_back(extra[c]);
                merged_rows.push_back(std::move(extra_rows[c++]));
            }
        }
        ks = std::move(merged_k);
        rows = std::move(merged_rows);
    }

    BandTable t;
    t.b = b;
    t.ks = ks;
    t.bands.assign(n_bands, {});
    for (int j = 0; j < n_bands; ++j) {
        t.parities.push_back(parity_of_band(j + 1));
        t.bands[j].reserve(ks.size());
        for (const auto& row : rows) t.bands[j].push_back(row[j]);
    }
    return t;
}

namespace {

std::vector<double> stencil_omegas(double b, double k, int j, const FiberOptions& opt, double step,
                                   const std::vector<int>& offsets) {
    const int m = ordinal_of_band(j);
    const Parity parity = parity_of_band(j);
    // One grid for the whole stencil: the wider of the two end-point grids.
    const FiberProblem left = build_problem(b, k - 2.0 * step, parity, m, opt);
    const FiberProblem right = build_problem(b, k + 2.0 * step, parity, m, opt);
    const FiberProblem& grid_src = left.grid.L >= right.grid.L ? left : right;
    std::vector<double> out;
    for (int o : offsets) {
        const auto p = with_k(grid_src, k + o * step);
        const auto pairs = opt.richardson ? solve_refined(p, m).extrapolated : solve(p, m);
        out.push_back(pairs.back().omega);
    }
    return out;
}

}  // namespace

double derivative_fd(double b, double k, int j, const FiberOptions& opt, double step) {
    if (step <= 0.0) step = 1e-2 * std::sqrt(b);
    const auto w = stencil_omegas(b, k, j, opt, step, {-2, -1, 1, 2});
    return (w[0] - 8.0 * w[1] + 8.0 * w[2] - w[3]) / (12.0 * step);
}

double second_derivative_fd(double b, double k, int j, const FiberOptions& opt, double step) {
    if (step <= 0.0) step = 1e-2 * std::sqrt(b);
    const auto w = stencil_omegas(b, k, j, opt, step, {-2, -1, 0, 1, 2});
    return (-w[0] + 16.0 * w[1] - 30.0 * w[2] + 16.0 * w[3] - w[4]) / (12.0 * step * step);
}

MinimumRecord find_minimum(int j, double b, const FiberOptions& opt) {
    if (j < 1) throw DomainError("find_minimum: index must be positive");
    if (!(b > 0.0)) throw DomainError("find_minimum: b must be positive");
    const int band = 2 * j - 1;
    auto g = [&](double k) { return band_pair(b, k, band, opt).omega - k * k; };

    double lo = 0.0, hi = std::sqrt(landau_level(band, b));
    double glo = g(lo), ghi = g(hi);
    if (!(glo > 0.0 && ghi < 0.0)) {
        std::ostringstream msg;
        msg << "find_minimum: no sign change of omega - k^2 on (0, sqrt(e)) for j=" << j;
        throw InvariantViolation(msg.str());
    }
    // Illinois variant of regula falsi; keeps the bracket at every step.
    const double tol = 1e-10 * std::sqrt(b);
    int side = 0;
    double x = lo;
    for (int it = 0; it < 200 && hi - lo > tol; ++it) {
        x = (lo * ghi - hi * glo) / (ghi - glo);
        if (!(x > lo && x < hi)) x = 0.5 * (lo + hi);
        const double gx = g(x);
        if (gx == 0.0) {
            lo = hi = x;
            break;
        }
        if (gx > 0.0) {
            lo = x;
            glo = gx;
            if (side == -1) ghi *= 0.5;
            side = -1;
        } else {
            hi = x;
            ghi = gx;
            if (side == 1) glo *= 0.5;
            side = 1;
        }
        if (std::fabs(gx) < 1e-14 * b) break;
    }
    MinimumRecord rec;
    rec.j = j;
    rec.kappa = std::fabs(glo) < std::fabs(ghi) ? lo : hi;
    if (hi - lo <= tol) rec.kappa = 0.5 * (lo + hi);
    const auto pair = band_pair(b, rec.kappa, band, opt);
    rec.energy = rec.kappa * rec.kappa;
    if (std::fabs(pair.omega - rec.energy) > 1e-8 * std::max(1.0, b)) {
        throw NumericalError("find_minimum: omega(kappa) differs from kappa^2");
    }
    rec.psi0_at_kappa = pair.psi0;
    rec.beta = 2.0 * rec.kappa / b * pair.psi0 * pair.psi0;
    if (!(rec.energy > landau_level(j - 1, b) && rec.energy < landau_level(j, b))) {
        throw InvariantViolation("find_minimum: band minimum outside its Landau window");
    }
    if (!(rec.beta > 0.0)) throw InvariantViolation("find_minimum: nonpositive effective mass");
    return rec;
}

EffectiveMass effective_mass(const MinimumRecord& rec, double b, const FiberOptions& opt, double tol) {
    EffectiveMass m;
    m.closed_form = 2.0 * rec.kappa / b * rec.psi0_at_kappa * rec.psi0_at_kappa;
    m.finite_difference = 0.5 * second_derivative_fd(b, rec.kappa, 2 * rec.j - 1, opt);
    m.relative_gap = std::fabs(m.closed_form - m.finite_difference) / std::fabs(m.closed_form);
    if (!(m.closed_form > 0.0) || !(m.finite_difference > 0.0)) {
        throw InvariantViolation("effective_mass: nonpositive value");
    }
    if (m.relative_gap > tol) {
        std::ostringstream msg;
        msg.precision(12);
        msg << "effective_mass: closed form " << m.closed_form << " vs finite difference "
            << m.finite_difference;
        throw NumericalError(msg.str());
    }
    return m;
}

MonotonicityReport monotonicity_report(const BandTable& table) {
    MonotonicityReport rep;
    const auto& ks = table.ks;
    for (int jj = 0; jj < table.n_bands(); ++jj) {
        const int j = jj + 1;
        const auto& s = table.bands[jj];
        // Differences below this floor are rounding noise, not shape.
        auto noise = [&](std::size_t i) {
            return 1e-9 * std::max({1.0, std::fabs(s[i].omega), table.b});
        };
        if (table.parities[jj] == Parity::Odd) {
            for (std::size_t i = 0; i < s.size(); ++i) {
                if (!(s[i].domega_bd < 0.0)) rep.violations.push_back({j, ks[i], "odd band derivative not negative"});
                if (i > 0 && s[i].omega - s[i - 1].omega > noise(i)) {
                    rep.violations.push_back({j, ks[i], "odd band increases"});
                }
            }
            continue;
        }
        int flips = 0;
        double flip_k = NAN;
        for (std::size_t i = 1; i < s.size(); ++i) {
            const bool prev_neg = s[i - 1].domega_bd < 0.0;
            const bool cur_neg = s[i].domega_bd < 0.0;
            if (prev_neg != cur_neg) {
                ++flips;
                if (flips == 1) flip_k = 0.5 * (ks[i - 1] + ks[i]);
                if (!prev_neg) rep.violations.push_back({j, ks[i], "even band derivative turns negative again"});
            }
        }
        if (flips > 1) rep.violations.push_back({j, flip_k, "even band has more than one minimum"});
        for (std::size_t i = 1; i < s.size(); ++i) {
            const double d = s[i].omega - s[i - 1].omega;
            const bool before = std::isnan(flip_k) ? s[i].domega_bd < 0.0 : ks[i] < flip_k;
            const bool after = !std::isnan(flip_k) && ks[i - 1] > flip_k;
            if (before && d > noise(i)) rep.violations.push_back({j, ks[i], "even band increases before its minimum"});
            if (after && d < -noise(i)) rep.violations.push_back({j, ks[i], "even band decreases after its minimum"});
        }
        rep.even_sign_flips.push_back(flips);
        rep.even_flip_k.push_back(flip_k);
    }
    return rep;
}

}  // namespace magbar

#include "magbar/mourre.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "magbar/errors.hpp"
#include "magbar/parallel.hpp"
#include "magbar/specfun.hpp"

namespace magbar {

Interval landau_window(int n, double b, const MinimumRecord& next) {
    if (n < 1) throw DomainError("landau_window: n must be positive");
    if (next.j != n + 1) throw PreconditionError("landau_window: record must belong to band n+1");
    const Interval w{landau_level(n, b), next.energy};
    if (!(w.lo < w.hi)) throw InvariantViolation("landau_window: empty window");
    return w;
}

namespace {

double hermite_value(double h, double t, double w0, double d0, double w1, double d1) {
    const double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * w0 + (t3 - 2 * t2 + t) * h * d0 + (-2 * t3 + 3 * t2) * w1 +
           (t3 - t2) * h * d1;
}

double hermite_slope(double h, double t, double w0, double d0, double w1, double d1) {
    const double t2 = t * t;
    return ((6 * t2 - 6 * t) * w0 + (3 * t2 - 4 * t + 1) * h * d0 + (-6 * t2 + 6 * t) * w1 +
            (3 * t2 - 2 * t) * h * d1) /
           h;
}

std::size_t locate(const std::vector<double>& ks, double k) {
    if (ks.size() < 2) throw ResolutionError("band table needs at least two samples");
    if (k < ks.front() || k > ks.back()) throw ResolutionError("band table does not cover requested k");
    auto it = std::upper_bound(ks.begin(), ks.end(), k);
    std::size_t i = static_cast<std::size_t>(it - ks.begin());
    if (i == 0) i = 1;
    if (i >= ks.size()) i = ks.size() - 1;
    return i - 1;
}

}  // namespace

BandInterpolant::BandInterpolant(const BandTable& table, std::vector<MinimumRecord> records)
    : table_(table), records_(std::move(records)) {
    for (int jj = 0; jj < table.n_bands(); ++jj) {
        const int j = jj + 1;
        const int m = ordinal_of_band(j);
        Branch br;
        const auto& s = table.bands[jj];
        if (parity_of_band(j) == Parity::Even) {
            const MinimumRecord* rec = nullptr;
            for (const auto& r : records_) {
                if (r.j == m) rec = &r;
            }
            if (rec == nullptr) {
                // Without a minimum record the band is not usable as a branch.
                br.floor = INFINITY;
                br.closed = true;
                branches_.push_back(br);
                continue;
            }
            for (std::size_t i = 0; i < s.size(); ++i) {
                if (table.ks[i] < rec->kappa) {
                    br.k.push_back(table.ks[i]);
                    br.w.push_back(s[i].omega);
                    br.d.push_back(s[i].domega_bd);
                }
            }
            br.k.push_back(rec->kappa);
            br.w.push_back(rec->energy);
            br.d.push_back(0.0);
            br.floor = rec->energy;
            br.closed = true;
        } else {
            for (std::size_t i = 0; i < s.size(); ++i) {
                br.k.push_back(table.ks[i]);
                br.w.push_back(s[i].omega);
                br.d.push_back(s[i].domega_bd);
            }
            br.floor = landau_level(m, table.b);
            br.closed = false;
        }
        branches_.push_back(std::move(br));
    }
}

const BandInterpolant::Branch& BandInterpolant::branch(int j) const {
    if (j < 1 || j > static_cast<int>(branches_.size())) throw PreconditionError("band index outside table");
    const auto& br = branches_[j - 1];
    if (br.k.empty()) throw PreconditionError("band has no decreasing branch (missing minimum record)");
    return br;
}

double BandInterpolant::value(int j, double k) const {
    const auto& s = table_.bands.at(j - 1);
    const auto& ks = table_.ks;
    const std::size_t i = locate(ks, k);
    const double h = ks[i + 1] - ks[i];
    return hermite_value(h, (k - ks[i]) / h, s[i].omega, s[i].domega_bd, s[i + 1].omega, s[i + 1].domega_bd);
}

double BandInterpolant::derivative(int j, double k) const {
    const auto& br = branches_.at(j - 1);
    // Prefer the branch (which carries the exact minimum) when k lies on it.
    const bool on_branch = !br.k.empty() && k >= br.k.front() && k <= br.k.back();
    const auto& ks = on_branch ? br.k : table_.ks;
    const std::size_t i = locate(ks, k);
    const double h = ks[i + 1] - ks[i];
    if (on_branch) {
        return hermite_slope(h, (k - ks[i]) / h, br.w[i], br.d[i], br.w[i + 1], br.d[i + 1]);
    }
    const auto& s = table_.bands.at(j - 1);
    return hermite_slope(h, (k - ks[i]) / h, s[i].omega, s[i].domega_bd, s[i + 1].omega, s[i + 1].domega_bd);
}

std::optional<double> BandInterpolant::inverse(int j, double v) const {
    const auto& br = branch(j);
    if (v > br.w.front()) {
        std::ostringstream msg;
        msg << "band table starts too far right to invert band " << j << " at energy " << v;
        throw ResolutionError(msg.str());
    }
    if (v <= br.floor) return std::nullopt;
    if (v < br.w.back()) {
        std::ostringstream msg;
        msg << "band table ends too early to invert band " << j << " at energy " << v;
        throw ResolutionError(msg.str());
    }
    std::size_t i = 0;
    while (i + 2 < br.k.size() && br.w[i + 1] > v) ++i;
    double lo = 0.0, hi = 1.0;
    const double h = br.k[i + 1] - br.k[i];
    for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (hermite_value(h, mid, br.w[i], br.d[i], br.w[i + 1], br.d[i + 1]) > v) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return br.k[i] + 0.5 * (lo + hi) * h;
}

BandInterpolant window_bands(int n, double b, int base_samples, const TraceOptions& opt) {
    if (n < 1) throw DomainError("window_bands: n must be positive");
    if (!(b > 0.0)) throw DomainError("window_bands: b must be positive");
    std::vector<MinimumRecord> records(static_cast<std::size_t>(n + 1));
    parallel_for(static_cast<std::size_t>(n + 1), opt.jobs,
                 [&](std::size_t m) { records[m] = find_minimum(static_cast<int>(m) + 1, b, opt.fiber); });
    const double sb = std::sqrt(b);
    const double k_min = -std::sqrt(records.back().energy) - 0.5 * sb;
    const double k_max = (std::sqrt(4.0 * n + 1.0) + 3.0) * sb;
    return BandInterpolant(trace(b, k_min, k_max, 2 * n, base_samples, opt), std::move(records));
}

double distance_cap(int n, double E, double b, double next_energy, DistanceReading reading) {
    const double a = E / b - landau_level(n, 1.0);
    const double c = next_energy / b - E / b;
    return reading == DistanceReading::Min ? std::min(a, c) : std::max(a, c);
}

namespace {

const MinimumRecord& record_for(const BandInterpolant& bands, int m) {
    for (const auto& r : bands.records()) {
        if (r.j == m) return r;
    }
    throw PreconditionError("minimum record missing for the requested window");
}

bool admissible(int n, double E, double delta, const BandInterpolant& bands) {
    const double b = bands.b();
    const double hi = E + delta * b, lo = E - delta * b;
    if (hi >= record_for(bands, n + 1).energy) return false;
    double prev_right = -INFINITY;
    for (int j = 1; j <= 2 * n; ++j) {
        // Energies below the tabulated tail sit within solver noise of the
        // branch floor, where the preimage is effectively unbounded.
        if (lo < bands.branch_reach(j)) return false;
        const auto right = bands.inverse(j, lo);
        if (!right) return false;
        const double left = *bands.inverse(j, hi);
        if (!(left > prev_right)) return false;
        prev_right = *right;
    }
    return true;
}

}  // namespace

double find_delta0(int n, double E, const BandInterpolant& bands, DistanceReading reading) {
    const double b = bands.b();
    const double next = record_for(bands, n + 1).energy;
    if (!(E > landau_level(n, b) && E < next)) throw PreconditionError("find_delta0: E outside the Landau window");
    const double cap = distance_cap(n, E, b, next, reading);
    if (admissible(n, E, cap, bands)) return cap * (1.0 - 1e-12);
    double lo = 0.0, hi = cap;
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (admissible(n, E, mid, bands)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if (!(lo > 0.0)) throw ResolutionError("find_delta0: no positive delta0 at this resolution");
    return lo;
}

double working_delta0(int n, double E, const BandInterpolant& bands, double fraction, DistanceReading reading) {
    if (!(fraction > 0.0 && fraction <= 1.0)) throw DomainError("working_delta0: fraction must lie in (0,1]");
    return fraction * find_delta0(n, E, bands, reading);
}

std::optional<Interval> band_preimage(const BandInterpolant& bands, int j, Interval energies) {
    const auto right = bands.inverse(j, energies.lo);
    if (!right) return std::nullopt;
    return Interval{*bands.inverse(j, energies.hi), *right};
}

MourreReport mourre_constant(int n, double E, double delta0, const BandInterpolant& bands) {
    if (!(delta0 > 0.0)) throw DomainError("mourre_constant: delta0 must be positive");
    const double b = bands.b();
    MourreReport rep;
    rep.window = {n, E, 2.0 * delta0, b};
    rep.delta0 = delta0;
    const Interval energies = rep.window.interval();
    rep.upper_bands_empty = energies.hi < record_for(bands, n + 1).energy;
    if (!rep.upper_bands_empty) throw InvariantViolation("mourre_constant: band 2n+1 meets the window");
    rep.c_n = INFINITY;
    for (int j = 1; j <= 2 * n; ++j) {
        const auto pre = band_preimage(bands, j, energies);
        if (!pre) throw InvariantViolation("mourre_constant: unbounded preimage");
        if (!rep.preimages.empty() && !(pre->lo > rep.preimages.back().hi)) {
            throw InvariantViolation("mourre_constant: preimages overlap");
        }
        rep.preimages.push_back(*pre);
        auto speed = [&](double k) { return -bands.derivative(j, k); };
        const int samples = 128;
        double best = INFINITY, best_k = pre->lo;
        for (int i = 0; i <= samples; ++i) {
            const double k = pre->lo + (pre->hi - pre->lo) * i / samples;
            const double s = speed(k);
            if (s < best) {
                best = s;
                best_k = k;
            }
        }
        // Golden-section polish around the best sample.
        const double step = (pre->hi - pre->lo) / samples;
        double a = std::max(pre->lo, best_k - step), c = std::min(pre->hi, best_k + step);
        const double g = 0.5 * (std::sqrt(5.0) - 1.0);
        for (int it = 0; it < 60; ++it) {
            const double x1 = c - g * (c - a), x2 = a + g * (c - a);
            if (speed(x1) < speed(x2)) {
                c = x2;
            } else {
                a = x1;
            }
        }
        const double polished = speed(0.5 * (a + c));
        if (polished < best) {
            best = polished;
            best_k = 0.5 * (a + c);
        }
        const double cj = best / std::sqrt(b);
        if (!(cj > 0.0)) {
            std::ostringstream msg;
            msg << "mourre_constant: nonpositive speed on band " << j << " at k=" << best_k;
            throw InvariantViolation(msg.str());
        }
        rep.c_per_band.push_back(cj);
        rep.argmin_k.push_back(best_k);
        rep.c_n = std::min(rep.c_n, cj);
    }
    return rep;
}

double FiberState::norm2() const {
    double s = 0.0;
    for (const auto& c : components) {
        for (std::size_t i = 0; i < c.k.size(); ++i) s += c.weight[i] * std::norm(c.beta[i]);
    }
    return s;
}

FiberState random_fiber_state(const MourreReport& report, const BandInterpolant& bands,
                              std::uint64_t seed, int nodes) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const int n = report.window.n;
    const double b = bands.b();
    const Interval inner{report.window.E - 0.5 * report.delta0 * b, report.window.E + 0.5 * report.delta0 * b};
    FiberState st;
    const int first = 1 + static_cast<int>(unit(rng) * 2 * n) % (2 * n);
    for (int j = 1; j <= 2 * n; ++j) {
        if (j != first && unit(rng) < 0.4) continue;
        const auto pre = band_preimage(bands, j, inner);
        if (!pre) continue;
        double a = pre->lo + unit(rng) * (pre->hi - pre->lo);
        double c = pre->lo + unit(rng) * (pre->hi - pre->lo);
        if (a > c) std::swap(a, c);
        if (c - a < 1e-3 * (pre->hi - pre->lo)) c = std::min(pre->hi, a + 1e-3 * (pre->hi - pre->lo) + 1e-12);
        const auto rule = specfun::gauss_legendre(nodes, a, c);
        FiberComponent comp;
        comp.j = j;
        comp.k = rule.nodes;
        comp.weight = rule.weights;
        const double amp = 0.1 + unit(rng);
        for (int i = 0; i < nodes; ++i) comp.beta.emplace_back(amp * gauss(rng), amp * gauss(rng));
        st.components.push_back(std::move(comp));
    }
    return st;
}

FiberState gaussian_fiber_state(const MourreReport& report, const BandInterpolant& bands, int j,
                                double k0, double width, int nodes) {
    const double b = bands.b();
    const Interval inner{report.window.E - 0.5 * report.delta0 * b, report.window.E + 0.5 * report.delta0 * b};
    const auto pre = band_preimage(bands, j, inner);
    if (!pre) throw PreconditionError("gaussian_fiber_state: band misses the window");
    const auto rule = specfun::gauss_legendre(nodes, pre->lo, pre->hi);
    FiberState st;
    FiberComponent comp;
    comp.j = j;
    comp.k = rule.nodes;
    comp.weight = rule.weights;
    for (double k : rule.nodes) {
        const double g = (k - k0) / width;
        comp.beta.emplace_back(std::exp(-0.5 * g * g), 0.0);
    }
    st.components.push_back(std::move(comp));
    return st;
}

FiberState evolve(const FiberState& state, const BandInterpolant& bands, double t) {
    FiberState out = state;
    for (auto& c : out.components) {
        for (std::size_t i = 0; i < c.k.size(); ++i) {
            c.beta[i] *= std::polar(1.0, -t * bands.value(c.j, c.k[i]));
        }
    }
    return out;
}

EdgeCurrent edge_current_fiber(const FiberState& state, const MourreReport& report,
                               const BandInterpolant& bands) {
    EdgeCurrent ec{0.0, 0.0, 0.0, false};
    for (const auto& c : state.components) {
        if (c.j < 1 || c.j > static_cast<int>(report.preimages.size())) {
            throw PreconditionError("edge_current_fiber: component on a band outside the window");
        }
        const auto& pre = report.preimages[c.j - 1];
        const double tol = 1e-12 * std::max(1.0, std::fabs(pre.hi - pre.lo));
        for (std::size_t i = 0; i < c.k.size(); ++i) {
            if (!pre.contains(c.k[i], tol)) throw PreconditionError("edge_current_fiber: support leaves the preimage");
            const double mass = c.weight[i] * std::norm(c.beta[i]);
            ec.norm2 += mass;
            ec.J += 0.5 * mass * (-bands.derivative(c.j, c.k[i]));
        }
    }
    ec.bound = 0.5 * report.c_n * std::sqrt(bands.b()) * ec.norm2;
    ec.pass = ec.J >= ec.bound;
    return ec;
}

double f_n(double delta, double a_frak, double q_frak, int n) {
    if (delta < 0.0 || a_frak < 0.0 || q_frak < 0.0) throw DomainError("f_n: arguments must be nonnegative");
    const double ra = std::sqrt(a_frak);
    return delta + q_frak + 2.0 * ra * (3.0 * ra + std::sqrt(2.0 * n + 1.0 + delta + q_frak));
}

double F_nE(double delta, double a_frak, double q_frak, int n, double delta0, double c_n) {
    if (!(delta0 > 0.0) || !(c_n > 0.0)) throw DomainError("F_nE: delta0 and c_n must be positive");
    const double f = f_n(delta, a_frak, q_frak, n);
    const double r = f / delta0;
    return r * r + 2.0 / c_n * (std::sqrt(a_frak) + std::sqrt(2.0 * n + 1.0 + f) * std::sqrt(r));
}

PerturbationBudget perturbation_budget(const MourreReport& report, double delta_fraction, double c_factor) {
    if (!(delta_fraction > 0.0 && delta_fraction < 1.0)) throw DomainError("perturbation_budget: fraction in (0,1)");
    const int n = report.window.n;
    const double d0 = report.delta0;
    const double c = report.c_n * c_factor;
    auto F = [&](double d, double a, double q) { return F_nE(d, a, q, n, d0, c); };

    // Largest unperturbed delta with F < 1/2 (F is increasing in delta).
    double lo = 0.0, hi = d0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (F(mid, 0.0, 0.0) < 0.5 ? lo : hi) = mid;
    }
    PerturbationBudget pb;
    pb.n = n;
    pb.E = report.window.E;
    pb.delta = delta_fraction * lo;
    pb.c_used = c;
    const double delta = pb.delta;

    const double floor = 1e-8, ceil = 1.0;
    auto max_q = [&](double a) {
        if (!(F(delta, a, floor) < 0.5)) return 0.0;
        if (F(delta, a, ceil) < 0.5) return ceil;
        double l = std::log(floor), h = std::log(ceil);
        for (int it = 0; it < 100; ++it) {
            const double m = 0.5 * (l + h);
            (F(delta, a, std::exp(m)) < 0.5 ? l : h) = m;
        }
        return std::exp(l);
    };
    const int grid = 200;
    double best = 0.0, best_la = 0.0;
    for (int i = 0; i <= grid; ++i) {
        const double la = std::log(floor) + (std::log(ceil) - std::log(floor)) * i / grid;
        const double v = std::exp(la) * max_q(std::exp(la));
        if (v > best) {
            best = v;
            best_la = la;
        }
    }
    if (!(best > 0.0)) throw InvariantViolation("perturbation_budget: empty feasible set");
    const double step = (std::log(ceil) - std::log(floor)) / grid;
    double a = best_la - step, cc = best_la + step;
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    auto obj = [&](double la) { return std::exp(la) * max_q(std::exp(la)); };
    for (int it = 0; it < 80; ++it) {
        const double x1 = cc - g * (cc - a), x2 = a + g * (cc - a);
        if (obj(x1) > obj(x2)) {
            cc = x2;
        } else {
            a = x1;
        }
    }
    double la = std::clamp(0.5 * (a + cc), std::log(floor), std::log(ceil));
    if (obj(la) < best) la = best_la;
    pb.a_star = std::exp(la);
    pb.q_star = max_q(pb.a_star);
    pb.F = F(delta, pb.a_star, pb.q_star);
    if (!(pb.F < 0.5) || !(pb.a_star > 0.0) || !(pb.q_star > 0.0)) {
        throw InvariantViolation("perturbation_budget: returned budget infeasible");
    }
    return pb;
}

}  // namespace magbar

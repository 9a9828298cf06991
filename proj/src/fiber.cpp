#include "magbar/fiber.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "magbar/errors.hpp"
#include "magbar/specfun.hpp"
#include "magbar/tridiag.hpp"

namespace magbar {

const char* parity_name(Parity p) { return p == Parity::Even ? "even" : "odd"; }

double landau_level(int j, double b) { return j <= 0 ? 0.0 : (2.0 * j - 1.0) * b; }

namespace {

double potential_floor(double k) { return k < 0.0 ? k * k : 0.0; }

// A-priori estimate of the top requested level of one parity class.
double level_estimate(double b, double k, Parity parity, int m) {
    double est = potential_floor(k) + (4.0 * m - 1.0) * b;
    if (k < 0.0) {
        const auto kind = parity == Parity::Even ? specfun::AiryKind::ZeroOfAiPrime
                                                 : specfun::AiryKind::ZeroOfAi;
        const int mm = std::min(m, specfun::kMaxAiryZero);
        est += std::pow(2.0 * b * std::fabs(k), 2.0 / 3.0) * std::fabs(specfun::airy_zero(kind, mm));
    }
    return est;
}

// WKB action from the turning point u = sqrt(w) out to u = U, in x units.
double decay_action_to(double b, double w, double U) {
    const double r = std::sqrt(std::max(U * U - w, 0.0));
    return (0.5 * U * r - 0.5 * w * std::log((U + r) / std::sqrt(w))) / b;
}

FiberProblem build_with_estimate(double b, double k, Parity parity, int levels, int N,
                                 double margin, double action, double est) {
    const double floor = potential_floor(k);
    const double target = floor + margin * (est - floor);
    const double u_margin = std::sqrt(target);

    double lo = std::sqrt(est), hi = lo + 1.0;
    while (decay_action_to(b, est, hi) < action) hi = lo + 2.0 * (hi - lo);
    for (int it = 0; it < 100; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (decay_action_to(b, est, mid) < action) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    const double u_wall = std::max(u_margin, hi);

    FiberProblem p;
    p.b = b;
    p.k = k;
    p.parity = parity;
    p.levels = levels;
    p.margin = margin;
    p.grid.N = N;
    p.grid.L = (k + u_wall) / b;

    const double h = p.grid.h();
    if (h * std::sqrt(est - floor) > 0.35) {
        std::ostringstream msg;
        msg << "build_problem: " << levels << " levels at k=" << k
            << " not resolvable with N=" << N;
        throw ConfigurationError(msg.str());
    }
    return p;
}

SymTridiag assemble(const FiberProblem& p) {
    const int N = p.grid.N;
    const double h = p.grid.h();
    const double ih2 = 1.0 / (h * h);
    SymTridiag t;
    if (p.parity == Parity::Even) {
        // Unknowns at x_0..x_{N-1}; symmetrized ghost-point row at the origin.
        t.d.resize(N);
        t.e.assign(N - 1, -ih2);
        for (int i = 0; i < N; ++i) t.d[i] = 2.0 * ih2 + effective_potential(p.b, p.k, i * h);
        t.e[0] = -std::sqrt(2.0) * ih2;
    } else {
        t.d.resize(N - 1);
        t.e.assign(N - 2, -ih2);
        for (int i = 1; i < N; ++i) t.d[i - 1] = 2.0 * ih2 + effective_potential(p.b, p.k, i * h);
    }
    return t;
}

void fill_boundary(EigenPair& e) {
    const auto& y = e.psi;
    if (e.parity == Parity::Even) {
        e.psi0 = y[0];
        e.dpsi0 = 0.0;
    } else {
        e.psi0 = 0.0;
        e.dpsi0 = (-25.0 * y[0] + 48.0 * y[1] - 36.0 * y[2] + 16.0 * y[3] - 3.0 * y[4]) / (12.0 * e.h);
    }
}

}  // namespace

FiberProblem build_problem(double b, double k, Parity parity, int requested_levels, int resolution,
                           double margin, double decay_action) {
    if (!(b > 0.0)) throw DomainError("build_problem: b must be positive");
    if (requested_levels < 1) throw DomainError("build_problem: need at least one level");
    if (resolution < 64) throw ConfigurationError("build_problem: N must be at least 64");
    if (!(margin > 1.0)) throw ConfigurationError("build_problem: margin must exceed 1");
    const double est = level_estimate(b, k, parity, requested_levels);
    return build_with_estimate(b, k, parity, requested_levels, resolution, margin, decay_action, est);
}

FiberProblem build_problem(double b, double k, Parity parity, int requested_levels,
                           const FiberOptions& opt) {
    return build_problem(b, k, parity, requested_levels, opt.N, opt.margin, opt.decay_action);
}

FiberProblem with_k(const FiberProblem& p, double k) {
    FiberProblem q = p;
    q.k = k;
    return q;
}

FiberProblem refined(const FiberProblem& p, int factor) {
    FiberProblem q = p;
    q.grid.N *= factor;
    return q;
}

std::vector<EigenPair> solve(const FiberProblem& p, int n_levels) {
    const int N = p.grid.N;
    const double h = p.grid.h();
    const SymTridiag t = assemble(p);
    if (n_levels < 1 || static_cast<std::size_t>(n_levels) > t.size() / 4) {
        throw ConfigurationError("solve: level count outside grid capability");
    }
    const auto omegas = lowest_eigenvalues(t, n_levels);
    std::vector<EigenPair> out;
    out.reserve(n_levels);
    const double scale = 1.0 / std::sqrt(2.0 * h);
    for (int m = 0; m < n_levels; ++m) {
        const auto u = inverse_iteration(t, omegas[m]);
        EigenPair e;
        e.parity = p.parity;
        e.j = global_band(p.parity, m + 1);
        e.omega = omegas[m];
        e.h = h;
        e.psi.assign(N + 1, 0.0);
        if (p.parity == Parity::Even) {
            e.psi[0] = std::sqrt(2.0) * u[0] * scale;
            for (int i = 1; i < N; ++i) e.psi[i] = u[i] * scale;
        } else {
            for (int i = 1; i < N; ++i) e.psi[i] = u[i - 1] * scale;
        }
        const double ref = p.parity == Parity::Even ? e.psi[0] : e.psi[1];
        if (ref < 0.0) {
            for (double& v : e.psi) v = -v;
        }
        fill_boundary(e);
        if (e.psi0 == 0.0 && e.dpsi0 == 0.0) {
            throw NumericalError("solve: eigenfunction has vanishing boundary data");
        }
        out.push_back(std::move(e));
    }
    return out;
}

RefinedSolution solve_refined(const FiberProblem& p, int n_levels) {
    RefinedSolution r;
    r.coarse = solve(p, n_levels);
    r.fine = solve(refined(p, 2), n_levels);
    r.extrapolated = r.fine;
    auto rich = [](double coarse, double fine) { return (4.0 * fine - coarse) / 3.0; };
    for (int m = 0; m < n_levels; ++m) {
        auto& e = r.extrapolated[m];
        e.omega = rich(r.coarse[m].omega, r.fine[m].omega);
        e.psi0 = rich(r.coarse[m].psi0, r.fine[m].psi0);
        e.dpsi0 = rich(r.coarse[m].dpsi0, r.fine[m].dpsi0);
    }
    return r;
}

RefinedSolution solve_levels_full(double b, double k, Parity parity, int n_levels,
                                  const FiberOptions& opt) {
    FiberProblem p = build_problem(b, k, parity, n_levels, opt);
    for (int attempt = 0; attempt < 4; ++attempt) {
        RefinedSolution r;
        if (opt.richardson) {
            r = solve_refined(p, n_levels);
        } else {
            r.extrapolated = solve(p, n_levels);
            r.coarse = r.extrapolated;
            r.fine = r.extrapolated;
        }
        const double floor = potential_floor(k);
        const double top = r.extrapolated.back().omega;
        const double wall = effective_potential(b, k, p.grid.L);
        if (wall - floor >= p.margin * (top - floor)) return r;
        p = build_with_estimate(b, k, parity, n_levels, opt.N, opt.margin, opt.decay_action,
                                floor + 1.25 * (top - floor));
    }
    throw ConfigurationError("solve_levels: boundary margin could not be satisfied");
}

std::vector<EigenPair> solve_levels(double b, double k, Parity parity, int n_levels,
                                    const FiberOptions& opt) {
    return solve_levels_full(b, k, parity, n_levels, opt).extrapolated;
}

EigenPair band_pair(double b, double k, int j, const FiberOptions& opt) {
    if (j < 1) throw DomainError("band_pair: band index must be positive");
    const int m = ordinal_of_band(j);
    return solve_levels(b, k, parity_of_band(j), m, opt).back();
}

std::vector<EigenPair> merge_parities(const std::vector<EigenPair>& even,
                                      const std::vector<EigenPair>& odd, double k) {
    for (std::size_t i = 1; i < even.size(); ++i) {
        if (!(even[i].omega > even[i - 1].omega)) throw PreconditionError("merge_parities: even list unsorted");
    }
    for (std::size_t i = 1; i < odd.size(); ++i) {
        if (!(odd[i].omega > odd[i - 1].omega)) throw PreconditionError("merge_parities: odd list unsorted");
    }
    std::vector<EigenPair> out;
    std::size_t ie = 0, io = 0;
    while (ie < even.size() || io < odd.size()) {
        const bool take_even = io >= odd.size() || (ie < even.size() && even[ie].omega < odd[io].omega);
        EigenPair e = take_even ? even[ie++] : odd[io++];
        const int j = static_cast<int>(out.size()) + 1;
        if (e.parity != parity_of_band(j)) {
            std::ostringstream msg;
            msg << "merge_parities: parity order flip at j=" << j << ", k=" << k;
            throw InvariantViolation(msg.str());
        }
        e.j = j;
        out.push_back(std::move(e));
    }
    return out;
}

BoundaryData boundary_data(const EigenPair& pair) { return {pair.psi0, pair.dpsi0}; }

double inner_product(const EigenPair& a, const EigenPair& b) {
    if (a.psi.size() != b.psi.size()) throw PreconditionError("inner_product: grids differ");
    double s = 0.5 * a.psi[0] * b.psi[0];
    for (std::size_t i = 1; i < a.psi.size(); ++i) s += a.psi[i] * b.psi[i];
    return 2.0 * a.h * s;
}

}  // namespace magbar

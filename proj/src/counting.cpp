#include "magbar/counting.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "magbar/errors.hpp"
#include "magbar/specfun.hpp"

namespace magbar {

DecayPotential separable_potential(double alpha, double amplitude) {
    if (!(alpha > 0.0 && alpha < 2.0)) throw DomainError("separable_potential: alpha must lie in (0,2)");
    if (!(amplitude > 0.0)) throw DomainError("separable_potential: amplitude must be positive");
    DecayPotential V;
    V.alpha = alpha;
    V.C = std::pow(2.0, 0.5 * alpha) * amplitude;
    V.v1 = [alpha, amplitude](double x) { return amplitude * std::pow(1.0 + std::fabs(x), -alpha); };
    V.v2 = [alpha](double y) { return std::pow(1.0 + y * y, -0.5 * alpha); };
    return V;
}

AdmissibilityReport check_decay_bound(const DecayPotential& V) {
    std::vector<double> pts{0.0};
    for (int i = 0; i <= 200; ++i) {
        const double t = std::pow(10.0, -3.0 + 9.0 * i / 200.0);
        pts.push_back(t);
        pts.push_back(-t);
    }
    AdmissibilityReport r{-INFINITY, INFINITY, false};
    for (double x : pts) {
        for (double y : pts) {
            const double v = V(x, y);
            const double bound = V.C * std::pow(1.0 + std::fabs(x), -V.alpha) * std::pow(1.0 + std::fabs(y), -V.alpha);
            r.max_violation = std::max(r.max_violation, v - bound);
            r.min_value = std::min(r.min_value, v);
        }
    }
    r.ok = r.max_violation <= 1e-12 * V.C && r.min_value >= 0.0;
    return r;
}

double fit_tail_limit(double alpha, const std::vector<double>& ys, const std::vector<double>& Q, double rel_tol) {
    if (ys.size() != Q.size()) throw PreconditionError("fit_tail_limit: size mismatch");
    double y_max = 0.0;
    for (double y : ys) y_max = std::max(y_max, std::fabs(y));
    std::vector<double> t, g;
    for (std::size_t i = 0; i < ys.size(); ++i) {
        const double ay = std::fabs(ys[i]);
        if (ay >= 0.1 * y_max && ay > 0.0) {
            t.push_back(1.0 / ay);
            g.push_back(std::pow(ay, alpha) * Q[i]);
        }
    }
    if (t.size() < 3) throw ResolutionError("fit_tail_limit: fewer than three samples in the last decade");
    const LinearFit f = linear_fit(t, g);
    double worst = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) worst = std::max(worst, std::fabs(g[i] - (f.intercept + f.slope * t[i])));
    if (!(f.intercept > 0.0) || worst > rel_tol * std::fabs(f.intercept)) {
        throw NumericalError("fit_tail_limit: tail does not settle (ell=" + std::to_string(f.intercept) +
                             ", max residual=" + std::to_string(worst) + ")");
    }
    return f.intercept;
}

namespace {

std::vector<double> symmetric_log_grid(double y_max, int per_side) {
    std::vector<double> ys{0.0};
    for (int i = 0; i < per_side; ++i) {
        const double t = std::pow(10.0, -2.0 + (std::log10(y_max) + 2.0) * i / (per_side - 1));
        ys.push_back(t);
        ys.push_back(-t);
    }
    std::sort(ys.begin(), ys.end());
    return ys;
}

}  // namespace

ReducedPotential reduced_potential(const DecayPotential& V, const EigenPair& ground, const std::vector<double>& y_grid) {
    if (ground.parity != Parity::Even) throw PreconditionError("reduced_potential: ground state must be even");
    if (!V.separable() && !V.tail_limit_asserted) {
        throw PreconditionError("reduced_potential: non-separable V needs an asserted tail limit");
    }
    if (y_grid.size() < 3) throw PreconditionError("reduced_potential: y grid too small");
    const std::size_t N = ground.psi.size() - 1;
    const double h = ground.h;
    // Whole-line integral from the half-line samples of an even function.
    auto x_integral = [&](const std::function<double(double)>& f) {
        double s = 0.0;
        for (std::size_t i = 0; i <= N; ++i) {
            const double x = h * static_cast<double>(i);
            const double w = (i == 0 || i == N) ? 0.5 : 1.0;
            s += w * (f(x) + f(-x)) * ground.psi[i] * ground.psi[i];
        }
        return s * h;
    };
    ReducedPotential R;
    R.alpha = V.alpha;
    R.ys = y_grid;
    if (V.separable()) {
        const double I = x_integral(V.v1);
        for (double y : y_grid) R.Q.push_back(I * V.v2(y));
        R.eval = [I, v2 = V.v2](double y) { return I * v2(y); };
    } else {
        for (double y : y_grid) R.Q.push_back(x_integral([&](double x) { return V.full(x, y); }));
    }
    for (double q : R.Q) {
        if (q < 0.0) throw InvariantViolation("reduced_potential: negative Q sample");
    }
    R.ell = fit_tail_limit(V.alpha, R.ys, R.Q);
    if (!V.separable()) {
        auto ys = R.ys;
        auto Qs = R.Q;
        const double ell = R.ell, alpha = R.alpha;
        R.eval = [ys, Qs, ell, alpha](double y) {
            if (y <= ys.front() || y >= ys.back()) return ell * std::pow(std::fabs(y), -alpha);
            const auto it = std::upper_bound(ys.begin(), ys.end(), y);
            const std::size_t i = static_cast<std::size_t>(it - ys.begin()) - 1;
            const double u = (y - ys[i]) / (ys[i + 1] - ys[i]);
            return (1.0 - u) * Qs[i] + u * Qs[i + 1];
        };
    }
    return R;
}

ReducedPotential reduced_from_function(double alpha, std::function<double(double)> Q, double y_max) {
    if (!(alpha > 0.0 && alpha < 2.0)) throw DomainError("reduced_from_function: alpha must lie in (0,2)");
    ReducedPotential R;
    R.alpha = alpha;
    R.ys = symmetric_log_grid(y_max, 200);
    for (double y : R.ys) {
        const double q = Q(y);
        if (q < 0.0) throw PreconditionError("reduced_from_function: Q must be nonnegative");
        R.Q.push_back(q);
    }
    R.ell = fit_tail_limit(alpha, R.ys, R.Q);
    R.eval = std::move(Q);
    return R;
}

SymTridiag reduced_operator(double m, const ReducedPotential& Q, double half_width, double h) {
    const std::size_t n = static_cast<std::size_t>(std::ceil(2.0 * half_width / h));
    if (n < 3) throw ResolutionError("reduced_operator: too few grid points");
    const double hh = 2.0 * half_width / static_cast<double>(n);
    const double c = m * m / (hh * hh);
    SymTridiag t;
    t.d.resize(n - 1);
    t.e.assign(n - 2, -c);
    for (std::size_t i = 1; i < n; ++i) t.d[i - 1] = 2.0 * c - Q.eval(-half_width + hh * static_cast<double>(i));
    return t;
}

Count1D count_1d(double m, const ReducedPotential& Q, double lambda, const Count1DOptions& opt) {
    if (!(m > 0.0)) throw DomainError("count_1d: m must be positive");
    if (!(lambda > 0.0)) throw DomainError("count_1d: lambda must be positive");
    if (!Q.eval) throw PreconditionError("count_1d: reduced potential has no evaluator");
    double Y = opt.min_half_width;
    if (Q.ell > 0.0) Y = std::max(Y, opt.extent * std::pow(Q.ell / lambda, 1.0 / Q.alpha));
    auto count_at = [&](double half) {
        const SymTridiag t = reduced_operator(m, Q, half, opt.h);
        return std::pair<long, std::size_t>(static_cast<long>(sturm_count(t, -lambda)), t.size());
    };
    auto [c, pts] = count_at(Y);
    for (int w = 0; w < opt.max_widenings; ++w) {
        const auto [c2, pts2] = count_at(1.5 * Y);
        if (c2 == c) return {c, Y, pts, w};
        Y *= 1.5;
        c = c2;
        pts = pts2;
    }
    throw ResolutionError("count_1d: count still changes under widening");
}

long inertia_count(const SymTridiag& t, double shift) {
    const Eigen::Index n = static_cast<Eigen::Index>(t.size());
    std::vector<Eigen::Triplet<double>> trips;
    for (Eigen::Index i = 0; i < n; ++i) {
        trips.emplace_back(i, i, t.d[i] - shift);
        if (i + 1 < n) {
            trips.emplace_back(i + 1, i, t.e[i]);
            trips.emplace_back(i, i + 1, t.e[i]);
        }
    }
    Eigen::SparseMatrix<double> A(n, n);
    A.setFromTriplets(trips.begin(), trips.end());
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(A);
    if (ldlt.info() != Eigen::Success) throw NumericalError("inertia_count: factorization failed");
    const auto D = ldlt.vectorD();
    long neg = 0;
    for (Eigen::Index i = 0; i < D.size(); ++i) {
        if (D(i) < 0.0) ++neg;
    }
    return neg;
}

double weyl_constant_1d(double alpha, double ell, double m) {
    if (!(alpha > 0.0 && alpha < 2.0)) throw DomainError("weyl_constant_1d: alpha must lie in (0,2)");
    if (!(ell > 0.0) || !(m > 0.0)) throw DomainError("weyl_constant_1d: ell and m must be positive");
    const double beta = std::exp(specfun::log_beta(1.5, 1.0 / alpha - 0.5));
    return 2.0 * std::pow(ell, 1.0 / alpha) / (std::numbers::pi * alpha * m) * beta;
}

double threshold_count_constant(double alpha, double L, double beta1) {
    if (!(beta1 > 0.0)) throw DomainError("threshold_count_constant: beta1 must be positive");
    if (!(alpha > 0.0 && alpha < 2.0)) throw DomainError("threshold_count_constant: alpha must lie in (0,2)");
    if (!(L > 0.0)) throw DomainError("threshold_count_constant: L must be positive");
    const double beta = std::exp(specfun::log_beta(1.5, 1.0 / alpha - 0.5));
    return 2.0 / (alpha * std::numbers::pi) / std::sqrt(beta1) * std::pow(L, 1.0 / alpha) * beta;
}

BirmanSchwinger birman_schwinger_check(double m, const std::function<double(double)>& Q, double lambda,
                                       double half_width, int n) {
    if (n < 2 || !(half_width > 0.0)) throw DomainError("birman_schwinger_check: bad grid");
    if (!(lambda > 0.0) || !(m > 0.0)) throw DomainError("birman_schwinger_check: lambda and m must be positive");
    const double h = 2.0 * half_width / (n + 1);
    const double c = m * m / (h * h);
    Eigen::VectorXd q(n);
    for (int i = 0; i < n; ++i) {
        q(i) = Q(-half_width + h * (i + 1));
        if (q(i) < 0.0) throw PreconditionError("birman_schwinger_check: Q must be nonnegative");
    }
    SymTridiag t;
    t.d.resize(n);
    t.e.assign(n - 1, -c);
    for (int i = 0; i < n; ++i) t.d[i] = 2.0 * c - q(i);
    BirmanSchwinger r;
    r.direct = static_cast<long>(sturm_count(t, -lambda));

    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        A(i, i) = 2.0 * c + lambda;
        if (i + 1 < n) A(i, i + 1) = A(i + 1, i) = -c;
    }
    const Eigen::MatrixXd G = A.llt().solve(Eigen::MatrixXd::Identity(n, n));
    const Eigen::VectorXd s = q.cwiseSqrt();
    const Eigen::MatrixXd K = s.asDiagonal() * G * s.asDiagonal();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (K + K.transpose()), Eigen::EigenvaluesOnly);
    r.bs = static_cast<long>((es.eigenvalues().array() > 1.0).count());
    r.equal = r.direct == r.bs;
    return r;
}

AsymptoticsCheck asymptotics_check(CountingCurve& curve, double alpha, double constant) {
    const auto& l = curve.lambdas;
    if (l.size() != curve.counts.size() || l.size() < 4) {
        throw PreconditionError("asymptotics_check: need at least four (lambda, count) pairs");
    }
    const auto [lo, hi] = std::minmax_element(l.begin(), l.end());
    if (!(*lo > 0.0) || *hi / *lo < 10.0 - 1e-9) throw PreconditionError("asymptotics_check: lambdas must span a decade");
    bool all_equal = true;
    std::vector<double> x, y;
    for (std::size_t i = 0; i < l.size(); ++i) {
        if (curve.counts[i] <= 0) throw ResolutionError("asymptotics_check: zero count, lambda range too large");
        if (curve.counts[i] != curve.counts[0]) all_equal = false;
        x.push_back(std::log(l[i]));
        y.push_back(std::log(static_cast<double>(curve.counts[i])));
    }
    if (all_equal) throw ResolutionError("asymptotics_check: degenerate fit, all counts equal");
    const LinearFit f = linear_fit(x, y);
    curve.fitted_exponent = -f.slope;
    curve.fitted_prefactor = std::exp(f.intercept);
    curve.r2 = f.r2;
    return {std::fabs(curve.fitted_exponent - (1.0 / alpha - 0.5)), curve.fitted_prefactor / constant};
}

namespace {

struct XGrid {
    int nx;
    double hx;
    double x(int i) const { return -0.5 * (nx + 1) * hx + (i + 1) * hx; }
};

XGrid x_grid(const Grid2DCount& g) {
    if (!(g.hx > 0.0) || !(g.hy > 0.0) || !(g.x_half > 0.0)) throw DomainError("2D grid: steps and extent must be positive");
    const int nx = static_cast<int>(std::lround(2.0 * g.x_half / g.hx)) - 1;
    if (nx < 4) throw ResolutionError("2D grid: too few x points");
    return {nx, 2.0 * g.x_half / (nx + 1)};
}

double fiber_bottom(double b, double k, const XGrid& X, double hy) {
    SymTridiag t;
    const double c = 1.0 / (X.hx * X.hx);
    t.d.resize(X.nx);
    t.e.assign(X.nx - 1, -c);
    for (int i = 0; i < X.nx; ++i) {
        t.d[i] = 2.0 * c + (2.0 - 2.0 * std::cos((k - b * std::fabs(X.x(i))) * hy)) / (hy * hy);
    }
    return lowest_eigenvalues(t, 1)[0];
}

}  // namespace

DiscreteThreshold discrete_threshold(double b, const Grid2DCount& grid) {
    if (!(b > 0.0)) throw DomainError("discrete_threshold: b must be positive");
    const XGrid X = x_grid(grid);
    const double kz = std::numbers::pi / grid.hy;
    const int scan = 400;
    double best = INFINITY, best_k = 0.0;
    for (int i = 0; i <= scan; ++i) {
        const double k = -kz + 2.0 * kz * i / scan;
        const double e = fiber_bottom(b, k, X, grid.hy);
        if (e < best) {
            best = e;
            best_k = k;
        }
    }
    const double step = 2.0 * kz / scan;
    double a = best_k - step, c = best_k + step;
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    for (int it = 0; it < 80; ++it) {
        const double x1 = c - g * (c - a), x2 = a + g * (c - a);
        if (fiber_bottom(b, x1, X, grid.hy) < fiber_bottom(b, x2, X, grid.hy)) {
            c = x2;
        } else {
            a = x1;
        }
    }
    const double k = 0.5 * (a + c);
    return {std::min(best, fiber_bottom(b, k, X, grid.hy)), k};
}

Count2D count_2d(double b, const DecayPotential& V, double ell, double lambda, const Grid2DCount& grid,
                 const DiscreteThreshold& threshold) {
    if (!(lambda > 0.0 && lambda < threshold.energy)) throw DomainError("count_2d: lambda must lie in (0, E_1)");
    if (!(ell > 0.0)) throw DomainError("count_2d: ell must be positive");
    const XGrid X = x_grid(grid);
    const double hy = grid.hy;
    const double y_turn = std::pow(ell / lambda, 1.0 / V.alpha);
    const int ny = static_cast<int>(std::ceil(2.0 * grid.extent * y_turn / hy)) - 1;
    if (ny < 2) throw ResolutionError("count_2d: too few y lines");
    const std::size_t unknowns = static_cast<std::size_t>(X.nx) * static_cast<std::size_t>(ny);
    if (unknowns > grid.max_unknowns) throw CapabilityError("count_2d: grid exceeds the unknown budget");
    const double y_half = 0.5 * (ny + 1) * hy;

    using Mat = Eigen::MatrixXcd;
    const int nx = X.nx;
    Eigen::VectorXcd phase(nx);
    for (int i = 0; i < nx; ++i) phase(i) = std::polar(1.0, b * std::fabs(X.x(i)) * hy);
    const double cx = 1.0 / (X.hx * X.hx), cy = 1.0 / (hy * hy);
    const double scale = 4.0 * cx + 4.0 * cy;

    Count2D out{0, lambda, threshold.energy, y_half, unknowns, 0};
    for (int attempt = 0; attempt < 6; ++attempt) {
        const double mu = threshold.energy - out.lambda;
        long neg = 0;
        bool singular = false;
        Mat coupled = Mat::Zero(nx, nx);  // C S^{-1} C^H from the previous line
        Eigen::SelfAdjointEigenSolver<Mat> es;
        for (int j = 0; j < ny && !singular; ++j) {
            const double y = -y_half + (j + 1) * hy;
            Mat S = -coupled;
            for (int i = 0; i < nx; ++i) {
                S(i, i) += 2.0 * cx + 2.0 * cy - V(X.x(i), y) - mu;
                if (i + 1 < nx) {
                    S(i, i + 1) -= cx;
                    S(i + 1, i) -= cx;
                }
            }
            es.compute(S);
            const auto& ev = es.eigenvalues();
            for (int i = 0; i < nx; ++i) {
                if (std::fabs(ev(i)) < 1e-12 * scale) singular = true;
                if (ev(i) < 0.0) ++neg;
            }
            if (singular) break;
            const Mat W = es.eigenvectors() * ev.cwiseInverse().asDiagonal() * es.eigenvectors().adjoint();
            coupled = (cy * cy) * (phase.asDiagonal() * W * phase.conjugate().asDiagonal());
        }
        if (!singular) {
            out.count = neg;
            return out;
        }
        ++out.jitters;
        out.lambda = lambda * (1.0 + 1e-9 * (attempt + 1));
    }
    throw NumericalError("count_2d: shift stays singular after jittering lambda");
}

}  // namespace magbar

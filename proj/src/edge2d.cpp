#include "magbar/edge2d.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "magbar/errors.hpp"

namespace magbar {

namespace {

using cplx = std::complex<double>;
using SpMat = Eigen::SparseMatrix<cplx>;
using Trip = Eigen::Triplet<cplx>;

double sech(double t) { return 1.0 / std::cosh(t); }

struct Layout {
    int nx;       // interior x points
    int nm;       // Fourier modes
    int m0;       // k_m = (m0 + m) dk
    double hx, dk, x_half;
    double x(int i) const { return -x_half + (i + 1) * hx; }
    double k(int m) const { return (m0 + m) * dk; }
    int idx(int i, int m) const { return i * nm + m; }
    int size() const { return nx * nm; }
};

// Multiplication by f(x) * (c_minus e^{-i s k0 y} + c_plus e^{i s k0 y}) in the
// Fourier basis: mode m receives from modes m - s (via c_plus) and m + s (via c_minus).
void add_harmonic(std::vector<Trip>& t, const Layout& L, int s, double amp, double width, cplx c_plus,
                  cplx c_minus) {
    if (amp == 0.0) return;
    for (int i = 0; i < L.nx; ++i) {
        const double g = amp * sech(L.x(i) / width);
        for (int m = 0; m < L.nm; ++m) {
            if (m - s >= 0) t.emplace_back(L.idx(i, m), L.idx(i, m - s), g * c_plus);
            if (m + s < L.nm) t.emplace_back(L.idx(i, m), L.idx(i, m + s), g * c_minus);
        }
    }
}

SpMat from_triplets(const Layout& L, const std::vector<Trip>& t) {
    SpMat A(L.size(), L.size());
    A.setFromTriplets(t.begin(), t.end());
    return A;
}

struct Operators {
    SpMat H;
    SpMat T;  // p_y - b|x| - a2
};

Operators assemble(const Layout& L, double b, const Perturbation2D& p) {
    const int s = p.harmonic;
    const double w = p.x_width;
    std::vector<Trip> kin, tt, q, a1, px;
    const double inv_h2 = 1.0 / (L.hx * L.hx);
    for (int i = 0; i < L.nx; ++i) {
        for (int m = 0; m < L.nm; ++m) {
            const int r = L.idx(i, m);
            kin.emplace_back(r, r, 2.0 * inv_h2);
            if (i > 0) kin.emplace_back(r, L.idx(i - 1, m), -inv_h2);
            if (i + 1 < L.nx) kin.emplace_back(r, L.idx(i + 1, m), -inv_h2);
            tt.emplace_back(r, r, L.k(m) - b * std::fabs(L.x(i)));
            const cplx c(0.0, -0.5 / L.hx);
            if (i + 1 < L.nx) px.emplace_back(r, L.idx(i + 1, m), c);
            if (i > 0) px.emplace_back(r, L.idx(i - 1, m), -c);
        }
    }
    // cos = (e^{+} + e^{-})/2, sin = (e^{+} - e^{-})/(2i).
    add_harmonic(tt, L, s, p.a2_amp, w, -0.5, -0.5);
    add_harmonic(q, L, s, p.q_amp, w, 0.5, 0.5);
    add_harmonic(a1, L, s, p.a1_amp, w, cplx(0.0, -0.5), cplx(0.0, 0.5));
    Operators ops;
    ops.T = from_triplets(L, tt);
    const SpMat K = from_triplets(L, kin);
    const SpMat Q = from_triplets(L, q);
    SpMat H = K + SpMat(ops.T * ops.T) + Q;
    if (p.a1_amp != 0.0) {
        const SpMat A1 = from_triplets(L, a1);
        const SpMat P = from_triplets(L, px);
        H = H - SpMat(P * A1) - SpMat(A1 * P) + SpMat(A1 * A1);
    }
    H.makeCompressed();
    ops.H = H;
    return ops;
}

SpMat shifted(const SpMat& H, double sigma) {
    SpMat I(H.rows(), H.cols());
    I.setIdentity();
    return H - cplx(sigma) * I;
}

// Number of eigenvalues of H below sigma (Sylvester inertia of an LDL^H factorization).
int count_below(const SpMat& H, double sigma) {
    Eigen::SimplicialLDLT<SpMat> ldlt(shifted(H, sigma));
    if (ldlt.info() != Eigen::Success) throw NumericalError("edge_current_2d: LDL factorization failed");
    const auto D = ldlt.vectorD();
    int neg = 0;
    for (Eigen::Index i = 0; i < D.size(); ++i) {
        if (D(i).real() < 0.0) ++neg;
    }
    return neg;
}

struct Ritz {
    std::vector<double> values;
    Eigen::MatrixXcd vectors;
    std::vector<double> residuals;
};

Ritz shift_invert(const SpMat& H, double sigma, int p, double tol, int max_it) {
    Eigen::SimplicialLDLT<SpMat> ldlt(shifted(H, sigma));
    if (ldlt.info() != Eigen::Success) throw NumericalError("edge_current_2d: LDL factorization failed");
    const Eigen::Index n = H.rows();
    std::mt19937_64 rng(12345);
    std::normal_distribution<double> g(0.0, 1.0);
    Eigen::MatrixXcd V(n, p);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (int j = 0; j < p; ++j) V(i, j) = cplx(g(rng), g(rng));
    }
    Ritz out;
    for (int it = 0; it < max_it; ++it) {
        Eigen::MatrixXcd W = ldlt.solve(V);
        Eigen::HouseholderQR<Eigen::MatrixXcd> qr(W);
        V = qr.householderQ() * Eigen::MatrixXcd::Identity(n, p);
        const Eigen::MatrixXcd HV = H * V;
        const Eigen::MatrixXcd S = V.adjoint() * HV;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (S + S.adjoint()));
        V = V * es.eigenvectors();
        const Eigen::MatrixXcd R = HV * es.eigenvectors() - V * es.eigenvalues().asDiagonal();
        out.values.assign(es.eigenvalues().data(), es.eigenvalues().data() + p);
        out.residuals.resize(p);
        // Converged when the Ritz pair nearest the shift is accurate; the rest are reported as is.
        double nearest = INFINITY;
        int best = 0;
        for (int j = 0; j < p; ++j) {
            out.residuals[j] = R.col(j).norm();
            if (std::fabs(out.values[j] - sigma) < nearest) {
                nearest = std::fabs(out.values[j] - sigma);
                best = j;
            }
        }
        out.vectors = V;
        if (out.residuals[best] <= tol * std::max(1.0, std::fabs(out.values[best]))) return out;
    }
    throw ResolutionError("edge_current_2d: shift-invert iteration did not converge");
}

double norm_grad_a(const Perturbation2D& p, double k0) {
    const double w = p.x_width, om = p.harmonic * k0;
    double best = 0.0;
    for (int ix = 0; ix <= 2000; ++ix) {
        const double x = 10.0 * w * ix / 2000.0;
        const double g = sech(x / w), gp = -g * std::tanh(x / w) / w;
        for (int iy = 0; iy < 256; ++iy) {
            const double th = 2.0 * std::numbers::pi * iy / 256.0;
            const double s = std::sin(th), c = std::cos(th);
            const double f = std::pow(p.a1_amp * gp * s, 2) + std::pow(p.a1_amp * g * om * c, 2) +
                             std::pow(p.a2_amp * gp * c, 2) + std::pow(p.a2_amp * g * om * s, 2);
            best = std::max(best, std::sqrt(f));
        }
    }
    return best;
}

}  // namespace

PerturbationSize perturbation_size(const Perturbation2D& p, double b, double dk) {
    if (!(b > 0.0) || !(dk > 0.0)) throw DomainError("perturbation_size: b and dk must be positive");
    if (p.harmonic < 1 || !(p.x_width > 0.0)) throw DomainError("perturbation_size: bad harmonic or width");
    const double a_inf = std::max(std::fabs(p.a1_amp), std::fabs(p.a2_amp));
    return {(a_inf * a_inf + norm_grad_a(p, dk)) / b, std::fabs(p.q_amp) / b};
}

Perturbation2D scale_to_budget(const Perturbation2D& shape, const PerturbationBudget& budget, double b,
                               double dk, double fraction) {
    if (!(fraction > 0.0)) throw DomainError("scale_to_budget: fraction must be positive");
    Perturbation2D out = shape;
    if (shape.q_amp != 0.0) out.q_amp = std::copysign(fraction * budget.q_star * b, shape.q_amp);
    const double a_inf = std::max(std::fabs(shape.a1_amp), std::fabs(shape.a2_amp));
    if (a_inf > 0.0) {
        const double g = norm_grad_a(shape, dk);
        const double target = fraction * budget.a_star * b;
        // a_inf^2 t^2 + g t = target
        const double t = 2.0 * target / (g + std::sqrt(g * g + 4.0 * a_inf * a_inf * target));
        out.a1_amp *= t;
        out.a2_amp *= t;
    }
    return out;
}

EdgeCurrent2DResult edge_current_2d(const BandInterpolant& bands, int n, double E_target,
                                    const Perturbation2D& pert, const EdgeCurrent2DOptions& opt) {
    const double b = bands.b();
    const double sb = std::sqrt(b);
    const auto& g = opt.grid;
    if (!(g.hx > 0.0) || !(g.dk > 0.0)) throw DomainError("edge_current_2d: grid steps must be positive");
    if (pert.harmonic < 1 || !(pert.x_width > 0.0)) throw DomainError("edge_current_2d: bad perturbation shape");

    const double next = bands.records().at(n).energy;
    const double k_lo = g.k_min != 0.0 ? g.k_min : -std::sqrt(next) - 0.5 * sb;
    const double k_hi = g.k_max != 0.0 ? g.k_max : (std::sqrt(4.0 * n + 1.0) + 2.0) * sb;
    Layout L;
    L.hx = g.hx / sb;
    L.dk = g.dk * sb;
    L.x_half = g.x_half != 0.0 ? g.x_half : k_hi / b + 6.0 / sb;
    L.nx = static_cast<int>(std::lround(2.0 * L.x_half / L.hx)) - 1;
    L.hx = 2.0 * L.x_half / (L.nx + 1);
    L.m0 = static_cast<int>(std::ceil(k_lo / L.dk));
    L.nm = static_cast<int>(std::floor(k_hi / L.dk)) - L.m0 + 1;
    if (L.nx < 8 || L.nm < 2) throw ResolutionError("edge_current_2d: grid too coarse");

    const Operators ops = assemble(L, b, pert);
    const Ritz ritz = shift_invert(ops.H, E_target, opt.subspace, opt.tol, opt.max_iterations);

    EdgeCurrent2DResult res{};
    res.unknowns = static_cast<std::size_t>(L.size());
    res.slack = opt.slack;
    int nearest = 0;
    for (int j = 1; j < opt.subspace; ++j) {
        if (std::fabs(ritz.values[j] - E_target) < std::fabs(ritz.values[nearest] - E_target)) nearest = j;
    }
    res.E = ritz.values[nearest];
    if (!(res.E > landau_level(n, b) && res.E < next)) {
        throw ResolutionError("edge_current_2d: nearest eigenvalue lies outside the Landau window");
    }

    res.delta0 = working_delta0(n, res.E, bands);
    const MourreReport report = mourre_constant(n, res.E, res.delta0, bands);
    const PerturbationBudget budget = perturbation_budget(report, 0.5, 0.5);
    res.c_n = report.c_n;
    res.delta = budget.delta;
    const auto size = perturbation_size(pert, b, L.dk);
    res.a_frak = size.a_frak;
    res.q_frak = size.q_frak;
    res.F = F_nE(res.delta, res.a_frak, res.q_frak, n, res.delta0, 0.5 * res.c_n);
    res.within_budget = res.F < 0.5;

    const double half = 0.5 * res.delta * b;
    res.in_window = count_below(ops.H, res.E + half) - count_below(ops.H, res.E - half);
    const double coeff = pert.is_zero() ? 0.5 : 0.25;
    res.pass = true;
    int resolved = 0;
    for (int j = 0; j < opt.subspace; ++j) {
        if (std::fabs(ritz.values[j] - res.E) > half) continue;
        if (ritz.residuals[j] > 1e3 * opt.tol * std::max(1.0, std::fabs(ritz.values[j]))) continue;
        ++resolved;
        const Eigen::VectorXcd v = ritz.vectors.col(j);
        const Eigen::VectorXcd Tv = ops.T * v;
        EdgeState2D st{};
        st.lambda = ritz.values[j];
        st.residual = ritz.residuals[j];
        st.J = -(v.adjoint() * Tv)(0).real() / v.squaredNorm();
        st.bound = coeff * report.c_n * sb;
        st.pass = st.J >= st.bound * (1.0 - opt.slack);

        int m_best = 0;
        double w_best = -1.0;
        for (int m = 0; m < L.nm; ++m) {
            double w = 0.0;
            for (int i = 0; i < L.nx; ++i) w += std::norm(v(L.idx(i, m)));
            if (w > w_best) {
                w_best = w;
                m_best = m;
            }
        }
        st.dominant_k = L.k(m_best);
        st.band = 1;
        double gap = INFINITY;
        for (int jb = 1; jb <= bands.table().n_bands(); ++jb) {
            const double d = std::fabs(bands.value(jb, st.dominant_k) - st.lambda);
            if (d < gap) {
                gap = d;
                st.band = jb;
            }
        }
        st.fiber_J = -0.5 * bands.derivative(st.band, st.dominant_k);
        st.fiber_gap = std::fabs(st.J - st.fiber_J) / std::fabs(st.fiber_J);
        res.pass = res.pass && st.pass;
        res.states.push_back(st);
    }
    if (resolved == 0) throw ResolutionError("edge_current_2d: no converged eigenvector in the window");
    if (resolved < res.in_window) {
        throw ResolutionError("edge_current_2d: window holds more eigenvalues than the subspace resolved");
    }
    return res;
}

}  // namespace magbar

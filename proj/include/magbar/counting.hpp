#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "magbar/bands.hpp"
#include "magbar/fit.hpp"
#include "magbar/tridiag.hpp"

namespace magbar {

// Nonnegative potential with decay rate alpha in (0, 2). Either separable,
// V = v1(x) v2(y), or given as a full function of (x, y). C is the constant
// of the decay bound 0 <= V <= C (1+|x|)^{-alpha} (1+|y|)^{-alpha}.
struct DecayPotential {
    double alpha = 1.0;
    double C = 1.0;
    std::function<double(double)> v1;
    std::function<double(double)> v2;
    std::function<double(double, double)> full;
    // For non-separable V the limit |y|^alpha int V psi^2 dx cannot be
    // certified from samples; the caller has to assert it exists.
    bool tail_limit_asserted = false;

    bool separable() const { return !full; }
    double operator()(double x, double y) const { return full ? full(x, y) : v1(x) * v2(y); }
};

// amplitude (1+|x|)^{-alpha} (1+y^2)^{-alpha/2}; the decay bound holds with C = 2^{alpha/2} amplitude.
DecayPotential separable_potential(double alpha, double amplitude = 1.0);

struct AdmissibilityReport {
    double max_violation;  // max of V - bound over the sample grid (<= 0 when admissible)
    double min_value;
    bool ok;
};

// Samples the decay bound on a logarithmic grid in |x|, |y| up to 1e6.
AdmissibilityReport check_decay_bound(const DecayPotential& V);

struct ReducedPotential {
    double alpha = 1.0;
    double ell = 0.0;  // limit of |y|^alpha Q(y)
    std::vector<double> ys;
    std::vector<double> Q;
    std::function<double(double)> eval;
};

// Q(y) = int V(x,y) psi(x)^2 dx over the whole line for an even, whole-line
// normalized ground state sampled on x >= 0.
ReducedPotential reduced_potential(const DecayPotential& V, const EigenPair& ground,
                                   const std::vector<double>& y_grid);

// A reduced potential given directly as a function (the one-dimensional model).
ReducedPotential reduced_from_function(double alpha, std::function<double(double)> Q, double y_max = 1e5);

// ell from the largest decade of the samples: |y|^alpha Q(y) fitted linearly in 1/|y|.
// Throws NumericalError when the residuals exceed rel_tol |ell|.
double fit_tail_limit(double alpha, const std::vector<double>& ys, const std::vector<double>& Q,
                      double rel_tol = 1e-3);

struct Count1DOptions {
    double h = 0.1;
    double extent = 3.0;  // box half-width in units of the turning point (ell/lambda)^{1/alpha}
    double min_half_width = 50.0;
    int max_widenings = 4;
};

struct Count1D {
    long count;
    double half_width;
    std::size_t points;
    int widenings;
};

// Number of eigenvalues below -lambda of -m^2 d^2/dy^2 - Q on [-Y, Y] with
// Dirichlet walls. Y widens by 1.5 until the count is stable.
Count1D count_1d(double m, const ReducedPotential& Q, double lambda, const Count1DOptions& opt = {});

SymTridiag reduced_operator(double m, const ReducedPotential& Q, double half_width, double h);

// Same count from a sparse LDL^T factorization (inertia), independent of the Sturm recurrence.
long inertia_count(const SymTridiag& t, double shift);

double weyl_constant_1d(double alpha, double ell, double m);
double threshold_count_constant(double alpha, double L, double beta1);

struct BirmanSchwinger {
    long direct;    // eigenvalues of T - Q below -lambda
    long bs;        // eigenvalues of Q^{1/2} (T + lambda)^{-1} Q^{1/2} above 1
    bool equal;
};

// Dense check on a uniform grid of n interior points in [-Y, Y].
BirmanSchwinger birman_schwinger_check(double m, const std::function<double(double)>& Q, double lambda,
                                       double half_width, int n);

struct CountingCurve {
    std::vector<double> lambdas;
    std::vector<long> counts;
    double fitted_exponent = 0.0;   // p in N ~ A lambda^{-p}
    double fitted_prefactor = 0.0;  // A
    double r2 = 0.0;
};

struct AsymptoticsCheck {
    double exponent_gap;
    double prefactor_ratio;
};

// Fills the fitted fields of the curve and compares with 1/alpha - 1/2 and the constant.
AsymptoticsCheck asymptotics_check(CountingCurve& curve, double alpha, double constant);

struct Grid2DCount {
    double hx = 0.15;
    double hy = 0.5;
    double x_half = 6.0;
    double extent = 3.0;  // y half-width in units of the turning point (ell/lambda)^{1/alpha}
    std::size_t max_unknowns = 10'000'000;
};

// Bottom of the spectrum of the discretized H0 on the x-box with y unbounded:
// min over the Brillouin zone of the lowest eigenvalue of the discrete fiber.
struct DiscreteThreshold {
    double energy;
    double k;
};
DiscreteThreshold discrete_threshold(double b, const Grid2DCount& grid);

struct Count2D {
    long count;
    double lambda;
    double threshold;
    double y_half;
    std::size_t unknowns;
    int jitters;
};

// N(E_1,h - lambda; H0 - V) by block LDL^H over y-lines (inertia is additive
// over the Schur complements). ell sets the y-extent.
Count2D count_2d(double b, const DecayPotential& V, double ell, double lambda, const Grid2DCount& grid,
                 const DiscreteThreshold& threshold);

}  // namespace magbar

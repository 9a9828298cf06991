#pragma once

#include <cstddef>

#include "magbar/mourre.hpp"

namespace magbar {

// Smooth perturbation with one y-harmonic:
//   q  = q_amp  sech(x/w) cos(s k0 y)
//   a1 = a1_amp sech(x/w) sin(s k0 y)
//   a2 = a2_amp sech(x/w) cos(s k0 y)
// where k0 = 2 pi / L_y is the box's wave-number spacing and w = x_width.
struct Perturbation2D {
    double q_amp = 0.0;
    double a1_amp = 0.0;
    double a2_amp = 0.0;
    int harmonic = 1;
    double x_width = 1.0;

    bool is_zero() const { return q_amp == 0.0 && a1_amp == 0.0 && a2_amp == 0.0; }
};

// Box: x in [-x_half, x_half] with Dirichlet walls, y periodic with
// period 2 pi / dk, Fourier modes k in [k_min, k_max]. Zero fields are
// chosen from the window (n, b).
struct Grid2D {
    double hx = 0.1;
    double dk = 0.1;
    double x_half = 0.0;
    double k_min = 0.0;
    double k_max = 0.0;
};

// Sup norms entering the budget: a_frak = (|a|^2 + |grad a|)/b, q_frak = |q|/b.
struct PerturbationSize {
    double a_frak;
    double q_frak;
};

PerturbationSize perturbation_size(const Perturbation2D& p, double b, double dk);

// Rescales q and (a1, a2) so that q_frak = fraction * budget.q_star and
// a_frak = fraction * budget.a_star.
Perturbation2D scale_to_budget(const Perturbation2D& shape, const PerturbationBudget& budget, double b,
                               double dk, double fraction);

struct EdgeState2D {
    double lambda;
    double residual;
    double J;      // <phi, (-(p_y - b|x|) + a2) phi>, ||phi|| = 1
    double bound;  // c_n/2 b^{1/2} unperturbed, c_n/4 b^{1/2} perturbed
    bool pass;
    double dominant_k;
    int band;          // nearest fiber band at dominant_k
    double fiber_J;    // -omega_band'(dominant_k) / 2
    double fiber_gap;  // |J - fiber_J| / |fiber_J|
};

struct EdgeCurrent2DResult {
    double E;  // window centre: the discrete eigenvalue closest to the target
    double delta;
    double delta0;
    double c_n;
    double a_frak;
    double q_frak;
    double F;              // F_{n,E}(delta, a_frak, q_frak) with c_n/2
    bool within_budget;
    int in_window;         // eigenvalues in Delta_E(delta), by inertia
    std::size_t unknowns;
    double slack;          // relative discretization slack on the bound
    std::vector<EdgeState2D> states;
    bool pass;
};

struct EdgeCurrent2DOptions {
    Grid2D grid;
    int subspace = 6;
    double slack = 0.02;
    double tol = 1e-10;
    int max_iterations = 200;
};

// Discretizes H(a,q) = (p_x - a1)^2 + (p_y - b|x| - a2)^2 + q, locates the
// eigenvalue nearest E_target by shift-invert subspace iteration, centres the
// energy window there and evaluates the edge current of every eigenvector in
// Delta_E(delta). Throws ResolutionError when no eigenvalue converges.
EdgeCurrent2DResult edge_current_2d(const BandInterpolant& bands, int n, double E_target,
                                    const Perturbation2D& pert, const EdgeCurrent2DOptions& opt = {});

}  // namespace magbar

#pragma once

#include <vector>

namespace magbar {

enum class Parity { Even, Odd };

const char* parity_name(Parity p);

// Global band index j (1-based) <-> (parity, ordinal m within the parity class).
inline Parity parity_of_band(int j) { return (j % 2 == 1) ? Parity::Even : Parity::Odd; }
inline int ordinal_of_band(int j) { return (j + 1) / 2; }
inline int global_band(Parity p, int m) { return p == Parity::Even ? 2 * m - 1 : 2 * m; }

// Landau level (2j-1) b, with level 0 equal to 0.
double landau_level(int j, double b);

struct Grid {
    double L = 0.0;  // wall position
    int N = 0;       // number of cells; nodes x_i = i h, i = 0..N

    double h() const { return L / N; }
};

struct FiberProblem {
    double b = 1.0;
    double k = 0.0;
    Parity parity = Parity::Even;
    Grid grid;
    int levels = 1;
    double margin = 4.0;
};

struct EigenPair {
    int j = 0;  // global band index
    Parity parity = Parity::Even;
    double omega = 0.0;
    std::vector<double> psi;  // samples at x_i = i h, i = 0..N (psi[N] = 0)
    double psi0 = 0.0;
    double dpsi0 = 0.0;
    double h = 0.0;
};

struct FiberOptions {
    int N = 4000;
    double margin = 4.0;
    // Required WKB action between the outer turning point and the wall.
    double decay_action = 18.0;
    bool richardson = false;
};

// Truncation length satisfying the boundary margin and the decay requirement.
FiberProblem build_problem(double b, double k, Parity parity, int requested_levels,
                           int resolution, double margin = 4.0, double decay_action = 18.0);
FiberProblem build_problem(double b, double k, Parity parity, int requested_levels,
                           const FiberOptions& opt);

// Same grid, different wave number. Used for finite differences in k.
FiberProblem with_k(const FiberProblem& p, double k);

// Same wall, N multiplied by factor.
FiberProblem refined(const FiberProblem& p, int factor);

// Effective potential (k - b x)^2 on the half-line.
inline double effective_potential(double b, double k, double x) {
    const double u = k - b * x;
    return u * u;
}

// Lowest n_levels of the parity-restricted operator on the problem grid.
std::vector<EigenPair> solve(const FiberProblem& problem, int n_levels);

struct RefinedSolution {
    std::vector<EigenPair> coarse;
    std::vector<EigenPair> fine;
    // omega, psi0, dpsi0 extrapolated in h^2; psi taken from the fine grid.
    std::vector<EigenPair> extrapolated;
};

// Solve on h and h/2 and extrapolate.
RefinedSolution solve_refined(const FiberProblem& problem, int n_levels);

// Build, solve, and verify the boundary margin against the computed top level,
// enlarging the wall when the a-priori estimate was too low.
std::vector<EigenPair> solve_levels(double b, double k, Parity parity, int n_levels,
                                    const FiberOptions& opt);

// As solve_levels, but keeps both grids when Richardson extrapolation is on.
// Without extrapolation all three lists hold the same single-grid solution.
RefinedSolution solve_levels_full(double b, double k, Parity parity, int n_levels,
                                  const FiberOptions& opt);

// Single band value / pair by global index.
EigenPair band_pair(double b, double k, int j, const FiberOptions& opt);

// Interleave sorted even and odd lists into global order, checking
// omega_m^+ < omega_m^- < omega_{m+1}^+.
std::vector<EigenPair> merge_parities(const std::vector<EigenPair>& even,
                                      const std::vector<EigenPair>& odd, double k = 0.0);

struct BoundaryData {
    double psi0;
    double dpsi0;
};

BoundaryData boundary_data(const EigenPair& pair);

// Full-line inner product of two pairs sampled on the same grid.
double inner_product(const EigenPair& a, const EigenPair& b);

}  // namespace magbar

#pragma once

#include <cstddef>
#include <vector>

namespace magbar {

// Real symmetric tridiagonal matrix: diagonal d (size n), off-diagonal e (size n-1).
struct SymTridiag {
    std::vector<double> d;
    std::vector<double> e;

    std::size_t size() const { return d.size(); }
};

// Number of eigenvalues strictly below x (Sturm sequence / LDL^T inertia).
std::size_t sturm_count(const SymTridiag& t, double x);

// Gershgorin enclosure of the spectrum.
void gershgorin(const SymTridiag& t, double& lo, double& hi);

// The index-th smallest eigenvalue (0-based) by bisection inside [lo, hi].
double bisect_eigenvalue(const SymTridiag& t, std::size_t index, double lo, double hi);

// The n lowest eigenvalues, increasing. Throws NumericalError if the final
// Sturm counts disagree with the returned ordering.
std::vector<double> lowest_eigenvalues(const SymTridiag& t, std::size_t n);

// Eigenvector for an (approximate) eigenvalue by shifted inverse iteration.
// Result has unit Euclidean norm; sign is left to the caller.
std::vector<double> inverse_iteration(const SymTridiag& t, double lambda, int iterations = 3);

// Solve (T - shift) x = rhs by Gaussian elimination with partial pivoting.
std::vector<double> tridiag_solve(const SymTridiag& t, double shift, std::vector<double> rhs);

// y = T x
std::vector<double> tridiag_apply(const SymTridiag& t, const std::vector<double>& x);

}  // namespace magbar

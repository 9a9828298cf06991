#pragma once

#include <string>
#include <vector>

#include "magbar/fiber.hpp"

namespace magbar {

struct BandSample {
    double k = 0.0;
    double omega = 0.0;
    double domega_fh = 0.0;
    double domega_bd = 0.0;
    double psi0 = 0.0;
    double dpsi0 = 0.0;
};

struct BandTable {
    double b = 1.0;
    std::vector<double> ks;
    std::vector<std::vector<BandSample>> bands;  // bands[j-1][i] at ks[i]
    std::vector<Parity> parities;

    int n_bands() const { return static_cast<int>(bands.size()); }
};

struct TraceOptions {
    FiberOptions fiber{4000, 4.0, 18.0, true};
    int refinement_levels = 2;
    double refinement_factor = 10.0;
    unsigned jobs = 0;
};

// All n_bands band samples at a single k.
std::vector<BandSample> sample_bands(double b, double k, int n_bands, const FiberOptions& opt);

BandTable trace(double b, double k_min, double k_max, int n_bands, int base_samples,
                const TraceOptions& opt = {});

// Feynman-Hellmann integral 2 * int (k - b|x|) psi^2 dx on the pair's grid.
double derivative_fh(const EigenPair& pair, double b, double k);

// (-2/b) [ (omega - k^2) psi(0)^2 + psi'(0)^2 ].
double derivative_boundary(const EigenPair& pair, double b, double k);

// Five-point central difference of omega_j on a grid frozen at k.
double derivative_fd(double b, double k, int j, const FiberOptions& opt, double step = 0.0);
double second_derivative_fd(double b, double k, int j, const FiberOptions& opt, double step = 0.0);

struct MinimumRecord {
    int j = 0;  // ordinal of the even band; global index 2j-1
    double kappa = 0.0;
    double energy = 0.0;
    double beta = 0.0;
    double psi0_at_kappa = 0.0;
};

MinimumRecord find_minimum(int j, double b, const FiberOptions& opt = {4000, 4.0, 18.0, true});

struct EffectiveMass {
    double closed_form;
    double finite_difference;
    double relative_gap;
};

// Throws NumericalError when the two routes differ by more than tol (relative).
EffectiveMass effective_mass(const MinimumRecord& rec, double b,
                             const FiberOptions& opt = {4000, 4.0, 18.0, true}, double tol = 1e-3);

struct MonotonicityViolation {
    int j;
    double k;
    std::string what;
};

struct MonotonicityReport {
    std::vector<MonotonicityViolation> violations;
    std::vector<int> even_sign_flips;     // per even band, number of derivative sign changes
    std::vector<double> even_flip_k;      // location of the (first) flip
    bool ok() const { return violations.empty(); }
};

MonotonicityReport monotonicity_report(const BandTable& table);

}  // namespace magbar

#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "magbar/mourre.hpp"

namespace magbar {

// Onset of the Gaussian envelope: (b|x| - k)^2 - omega >= b^2 (|x| - x_n)^2 for |x| >= x_n.
double turning_point(double k, double b, double omega);

struct LocalizationCheck {
    int j = 0;
    double k = 0.0;
    double b = 1.0;
    double x_n = 0.0;
    double psi_at_xn = 0.0;  // |psi(x_n)|, interpolated
    double prefactor = 0.0;  // (2b/pi)^{1/4}
    double max_ratio = 0.0;  // max over grid points |x| >= x_n of |psi| / envelope
    bool envelope_ok = false;
};

inline constexpr double kEnvelopeTolerance = 1e-6;

// Compares |psi| against (2b/pi)^{1/4} exp(-b (|x| - x_n)^2 / 2) on every grid point beyond x_n.
LocalizationCheck envelope_check(const EigenPair& pair, double b, double k, double tol = kEnvelopeTolerance);

// (x, |psi|, envelope) on the grid, for plotting.
std::vector<std::array<double, 3>> envelope_profile(const EigenPair& pair, double b, double k);

// Mass of the (normalized, whole-line) eigenfunction beyond |x| = fraction * L.
double tail_mass(const EigenPair& pair, double fraction = 0.9);

// Mass of the eigenfunction inside |x| <= r and outside, on the whole line.
struct SplitMass {
    double inside;
    double outside;
};
SplitMass split_mass(const EigenPair& pair, double r);

struct StripMass {
    double radius;  // b^{-1/2 + eps}
    double inside;
    double outside;
    double bound;   // 1 - sqrt(2) exp(-b^eps)
    bool pass;
};

// Fraction of a fiber state's mass in the strip |x| <= b^{-1/2+eps}. The
// components must lie on pairwise disjoint k-supports (true for window states).
StripMass strip_mass(const FiberState& state, const BandInterpolant& bands, double epsilon,
                     const FiberOptions& opt = {4000, 4.0, 18.0, true}, double norm_tol = 1e-10);

FiberState normalized(const FiberState& state);

struct ThresholdScan {
    std::vector<double> bs;
    std::vector<int> failures;    // per b, over the sampled states
    std::vector<double> worst;    // per b, min over states of inside - bound
    double b_tilde;               // smallest scanned b from which every larger b passes; NaN if none
};

// Empirical threshold for the strip-mass bound at the middle of the window of level n.
ThresholdScan strip_threshold_scan(int n, double epsilon, const std::vector<double>& bs, int states,
                                   std::uint64_t seed, unsigned jobs = 0);

}  // namespace magbar

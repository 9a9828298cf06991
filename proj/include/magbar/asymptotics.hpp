#pragma once

#include <vector>

#include "magbar/fiber.hpp"
#include "magbar/fit.hpp"
#include "magbar/specfun.hpp"

namespace magbar {

struct AiryPrediction {
    int j;
    double k;
    specfun::AiryConstants constants;
    double predicted;  // k^2 - (2 b |k|)^{2/3} z
    double bound;      // D b^{4/3} / (2|k|)^{2/3}
};

AiryPrediction airy_prediction(double b, double k, int j);

struct AiryCheck {
    AiryPrediction prediction;
    double omega;
    double measured_error;
    double bound;
    bool pass;
};

AiryCheck airy_check(double b, double k, int j, const FiberOptions& opt = {4000, 4.0, 18.0, true});

struct AiryResidual {
    double residual;      // || (h(k) - prediction) Psi ||
    double multiplier;    // || b^2 x^2 Psi ||
    double identity_gap;  // max pointwise |(h - prediction)Psi - b^2 x^2 Psi|
    double norm;          // || Psi ||
    double bound;
};

// Residual of the scaled Airy quasimode, evaluated with the exact second
// derivative Ai'' = x Ai and adaptive quadrature.
AiryResidual airy_residual(double b, double k, int j);

// Normalized Airy quasimode for band j at wave number k < 0.
double airy_quasimode(double b, double k, int j, double x);

struct HOCheck {
    double level;         // (2j-1) b
    double gap_plus;      // level - omega_j^+  (boundary identity)
    double gap_minus;     // omega_j^- - level  (boundary identity)
    double gap_plus_direct;
    double gap_minus_direct;
    bool pass;
};

// Gaps to the Landau level from the half-line Wronskian identity against the
// oscillator eigenfunction; the direct eigenvalue differences are reported too.
HOCheck ho_check(double b, double k, int j, const FiberOptions& opt = {4000, 4.0, 18.0, true});

// omega_j^- - omega_j^+ from the discrete Wronskian identity on a shared grid,
// extrapolated in h^2 when requested.
double splitting(double b, double k, int j, const FiberOptions& opt = {4000, 4.0, 18.0, true});

struct SplittingFit {
    std::vector<double> ks;
    std::vector<double> splittings;
    LinearFit fit;       // log(splitting) against k^2 / b
    double rate;         // fitted slope
    double fitted_C;     // smallest C with splitting <= 2 C b exp(-k^2/(4b)) on the samples
    bool nonnegative;
    bool pass;
};

SplittingFit splitting_fit(double b, int j, const std::vector<double>& k_samples,
                           const FiberOptions& opt = {4000, 4.0, 18.0, true});

}  // namespace magbar

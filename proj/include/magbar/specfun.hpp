#pragma once

#include <functional>
#include <vector>

namespace magbar::specfun {

enum class AiryKind { ZeroOfAi, ZeroOfAiPrime };

struct AiryConstants {
    AiryKind kind;
    int j;
    double z;  // j-th zero of Ai or Ai'
    double c;  // integral of Ai(v+z)^2 over v >= 0
    double D;  // sqrt(moment4 / c)
};

inline constexpr int kMaxAiryZero = 64;
inline constexpr int kMaxHermiteIndex = 60;

double airy_ai(double x);
double airy_ai_prime(double x);

// j-th zero (j >= 1) of Ai or Ai'. Zeros are negative and decrease with j.
double airy_zero(AiryKind kind, int j);

// Integral over v >= 0 of v^power * Ai(v + z_j)^2, power in {0, 4}.
double airy_moment(AiryKind kind, int j, int power);

AiryConstants airy_constants(AiryKind kind, int j);

// Normalized oscillator eigenfunction of -d^2/dx^2 + (b x - k)^2 with
// eigenvalue (2j+1) b, centred at x = k/b.
double hermite_eigenfunction(int j, double b, double x, double k);

double log_beta(double a, double b);

struct QuadratureResult {
    double value;
    double error;
    int intervals;
};

// Adaptive Gauss-Kronrod (7/15) integration of f over [a, b].
// Throws NumericalError when the tolerance is not met within max_intervals.
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           double rel_tol = 1e-12, double abs_tol = 1e-14,
                           int max_intervals = 4000);

struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// n-point Gauss-Legendre rule on [a, b].
GaussRule gauss_legendre(int n, double a = -1.0, double b = 1.0);

}  // namespace magbar::specfun

#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "magbar/bands.hpp"

namespace magbar {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    bool contains(double x, double tol = 0.0) const { return x >= lo - tol && x <= hi + tol; }
};

// (e_n(b), E_{n+1}(b)); `next` is the minimum record of even band n+1.
Interval landau_window(int n, double b, const MinimumRecord& next);

// Piecewise cubic Hermite interpolation of a traced band (values and
// boundary-formula derivatives).
class BandInterpolant {
public:
    BandInterpolant(const BandTable& table, std::vector<MinimumRecord> records);

    double value(int j, double k) const;
    double derivative(int j, double k) const;

    // k on the decreasing branch of band j with omega_j(k) = v. Returns
    // nullopt when v lies at or below the branch infimum (no bounded preimage);
    // throws ResolutionError when the table does not reach the preimage.
    std::optional<double> inverse(int j, double v) const;

    // Lowest energy tabulated on the decreasing branch of band j.
    double branch_reach(int j) const { return branch(j).w.back(); }

    const BandTable& table() const { return table_; }
    double b() const { return table_.b; }
    const std::vector<MinimumRecord>& records() const { return records_; }

private:
    struct Branch {
        std::vector<double> k, w, d;
        double floor;  // infimum of the branch (E_m or e_m)
        bool closed;   // even band: branch ends at kappa
    };
    const Branch& branch(int j) const;
    BandTable table_;
    std::vector<MinimumRecord> records_;
    std::vector<Branch> branches_;
};

// Traces bands 1..2n over a k range wide enough to invert every band on the
// Landau window of level n, and locates the minima of even bands 1..n+1.
BandInterpolant window_bands(int n, double b, int base_samples = 96, const TraceOptions& opt = {});

enum class DistanceReading { Min, Max };

double distance_cap(int n, double E, double b, double next_energy, DistanceReading reading);

// Largest delta0 (bisection) such that bands >= 2n+1 miss [E - delta0 b, E + delta0 b]
// and the preimages of bands 1..2n are pairwise disjoint.
double find_delta0(int n, double E, const BandInterpolant& bands,
                   DistanceReading reading = DistanceReading::Min);

// Working delta0: a fixed fraction of the supremum above. At the supremum the
// odd band 2n reaches its flat tail and the Mourre constant degenerates to 0.
inline constexpr double kDelta0Fraction = 0.5;
double working_delta0(int n, double E, const BandInterpolant& bands, double fraction = kDelta0Fraction,
                      DistanceReading reading = DistanceReading::Min);

struct EnergyWindow {
    int n = 1;
    double E = 0.0;
    double delta = 0.0;  // interval is [E - delta b / 2, E + delta b / 2]
    double b = 1.0;
    Interval interval() const { return {E - 0.5 * delta * b, E + 0.5 * delta * b}; }
};

struct MourreReport {
    EnergyWindow window;  // window.delta = 2 delta0, the Mourre window
    double delta0 = 0.0;
    std::vector<Interval> preimages;  // bands 1..2n
    std::vector<double> c_per_band;   // scaled by b^{-1/2}
    std::vector<double> argmin_k;
    double c_n = 0.0;
    bool upper_bands_empty = false;
};

MourreReport mourre_constant(int n, double E, double delta0, const BandInterpolant& bands);

// Preimage of an arbitrary energy interval on the decreasing branch of band j.
std::optional<Interval> band_preimage(const BandInterpolant& bands, int j, Interval energies);

struct FiberComponent {
    int j = 1;
    std::vector<double> k;
    std::vector<double> weight;
    std::vector<std::complex<double>> beta;
};

struct FiberState {
    std::vector<FiberComponent> components;
    double norm2() const;
};

// Random state supported in the preimages of Delta_E(delta0).
FiberState random_fiber_state(const MourreReport& report, const BandInterpolant& bands,
                              std::uint64_t seed, int nodes = 16);

// Gaussian profile on one band, centred at k0 with width s, truncated to the preimage.
FiberState gaussian_fiber_state(const MourreReport& report, const BandInterpolant& bands, int j,
                                double k0, double width, int nodes = 48);

// Free evolution: beta_j(k) -> exp(-i t omega_j(k)) beta_j(k).
FiberState evolve(const FiberState& state, const BandInterpolant& bands, double t);

struct EdgeCurrent {
    double J;
    double norm2;
    double bound;  // (c_n / 2) b^{1/2} ||phi||^2
    bool pass;
};

// J_y = (1/2) sum_j int |beta_j|^2 (-omega_j') dk.
EdgeCurrent edge_current_fiber(const FiberState& state, const MourreReport& report,
                               const BandInterpolant& bands);

double f_n(double delta, double a_frak, double q_frak, int n);
double F_nE(double delta, double a_frak, double q_frak, int n, double delta0, double c_n);

struct PerturbationBudget {
    int n = 1;
    double E = 0.0;
    double delta = 0.0;
    double a_star = 0.0;
    double q_star = 0.0;
    double F = 0.0;  // F_{n,E}(delta, a_star, q_star)
    double c_used = 0.0;
};

// delta is fixed at delta_fraction times the largest delta with F(delta,0,0) < 1/2;
// then a_star * q_star is maximized on a logarithmic grid with F < 1/2.
// c_factor = 0.5 gives the budget for the perturbed edge-current bound.
PerturbationBudget perturbation_budget(const MourreReport& report, double delta_fraction = 0.5,
                                       double c_factor = 1.0);

}  // namespace magbar

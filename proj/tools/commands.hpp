#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "report.hpp"

namespace magbar::cli {

struct BandsArgs {
    double b = 1.0;
    double kmin = -4.0;
    double kmax = 6.0;
    int nbands = 8;
    int samples = 200;
    int N = 4000;
    bool no_richardson = false;
};

struct MinimaArgs {
    double b = 1.0;
    int jmax = 3;
    int N = 4000;
};

struct AiryArgs {
    double b = 1.0;
    std::vector<double> ks{-15.0, -20.0, -40.0};
    int jmax = 4;
};

struct HoArgs {
    double b = 1.0;
    int j = 1;
    double kmin = 3.0;
    double kmax = 6.0;
    int points = 7;
};

struct WindowArgs {
    double b = 1.0;
    int n = 1;
    std::string E = "mid";
    std::string reading = "min";
    double delta0_fraction = 0.5;
};

struct MourreArgs {
    WindowArgs window;
    int states = 200;
    std::uint64_t seed = 1;
    double evolve_t = 3.7;
};

struct BudgetArgs {
    WindowArgs window;
    double delta_fraction = 0.5;
    double c_factor = 1.0;
};

struct Edge2dArgs {
    WindowArgs window;
    double q = 1.0;
    double a1 = 0.5;
    double a2 = 1.0;
    int harmonic = 1;
    double budget_fraction = 0.5;
    double hx = 0.1;
    double dk = 0.1;
};

struct LocalizeArgs {
    WindowArgs window;
    double eps = 0.25;
    int states = 50;
    std::uint64_t seed = 1;
    int per_band = 11;
    std::vector<double> scan{10.0, 30.0, 100.0, 300.0};
    int scan_states = 10;
};

struct Count1dArgs {
    double alpha = 1.0;
    double ell = 1.0;
    double m = 1.0;
    std::vector<double> lambdas{1e-3, 3e-4, 1e-4};
    double h = 0.1;
    int bs_instances = 20;
    std::uint64_t seed = 1;
};

struct Count2dArgs {
    double b = 1.0;
    double alpha = 1.0;
    double amplitude = 1.0;
    double lambda_max = 3e-2;  // relative to the discrete threshold
    double lambda_min = 3e-3;
    int points = 5;
    double hx = 0.15;
    double hy = 0.5;
    double x_half = 6.0;
    double extent = 3.0;
    std::size_t max_unknowns = 10'000'000;
    bool refine = false;
};

void cmd_bands(const BandsArgs& a, unsigned jobs, Report& r);
void cmd_minima(const MinimaArgs& a, unsigned jobs, Report& r);
void cmd_airy(const AiryArgs& a, unsigned jobs, Report& r);
void cmd_ho(const HoArgs& a, unsigned jobs, Report& r);
void cmd_mourre(const MourreArgs& a, unsigned jobs, Report& r);
void cmd_budget(const BudgetArgs& a, unsigned jobs, Report& r);
void cmd_edge2d(const Edge2dArgs& a, unsigned jobs, Report& r);
void cmd_localize(const LocalizeArgs& a, unsigned jobs, Report& r);
void cmd_count1d(const Count1dArgs& a, unsigned jobs, Report& r);
void cmd_count2d(const Count2dArgs& a, unsigned jobs, Report& r);

}  // namespace magbar::cli

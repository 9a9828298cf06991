#pragma once

#include <vector>

namespace magbar {

struct LinearFit {
    double slope;
    double intercept;
    double r2;
};

// Ordinary least squares y = slope x + intercept.
LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace magbar

#pragma once

#include <functional>
#include <vector>

namespace veemap {

struct SimplexOptions {
    int max_evals = 1000;
    double xtol = 1e-10;  // simplex diameter, in the scaled coordinates
    double ftol = 1e-15;  // spread of vertex values
    bool adaptive = true; // dimension-dependent coefficients
};

struct SimplexResult {
    std::vector<double> x;
    double f = 0;
    int evals = 0;
};

// Minimizes f starting from x0; initial simplex x0 + step_i e_i (step may be negative).
SimplexResult nelder_mead(const std::function<double(const std::vector<double>&)>& f, std::vector<double> x0,
                          const std::vector<double>& step, const SimplexOptions& opt = {});

}  // namespace veemap

#pragma once

#include <functional>
#include <vector>

namespace aqopt {

using Objective = std::function<double(const std::vector<double>&)>;

struct SimplexOptions {
    int max_evals = 4000;
    double f_tol = 1e-12;       // spread of simplex values
    double x_tol = 1e-10;       // spread of simplex vertices
    double init_step = 0.25;    // initial simplex edge per coordinate
    std::vector<double> init_steps;  // optional per-coordinate override
};

struct SimplexResult {
    std::vector<double> x;
    double value = 0.0;
    int evals = 0;
    bool converged = false;
};

// Nelder-Mead downhill simplex with standard reflection/expansion/contraction
// coefficients. Deterministic for a given starting point.
SimplexResult nelder_mead(const Objective& f, const std::vector<double>& x0,
                          const SimplexOptions& opts = {});

// One pass of golden-section line searches along each coordinate; cheap
// polish for nearly separable objectives.
SimplexResult coordinate_polish(const Objective& f, const std::vector<double>& x0, double radius,
                                int evals_per_coord = 24);

}  // namespace aqopt

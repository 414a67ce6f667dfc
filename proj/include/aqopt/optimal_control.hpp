#pragma once

#include <Eigen/Dense>
#include <vector>

#include "aqopt/evolve.hpp"
#include "aqopt/near_adiabatic.hpp"
#include "aqopt/operators.hpp"
#include "aqopt/schedule.hpp"

namespace aqopt {

struct GradientVector {
    std::vector<double> values;  // dE(t_f)/du_k per grid step
    double t_f = 0;
};

// Exact gradient of the final energy of the piecewise-constant evolution:
// one forward pass storing per-step states, one backward adjoint pass from
// C|psi(t_f)>, combined per step through the divided-difference derivative
// of the step propagator (the small-dt limit is 2 dt Im<adj|(B-C)|psi>).
// The state space (full/sector) follows the initial state's dimension.
// A shared cache (matching the space) avoids refactorizing revisited u.
GradientVector control_gradient(const OperatorPair& pair, const PiecewiseConstant& schedule,
                                const Eigen::VectorXcd& initial, StepCache* cache = nullptr);

struct DescendConfig {
    int max_iters = 200;
    double energy_tol = 1e-10;  // stop when an accepted step improves less
    double init_step = 1.0;
    double shrink = 0.5;
    int max_backtracks = 40;
    double armijo_c = 1e-4;
    // Objective-loop decomposition grid. Coarser than ~1e-6 switches to one
    // persistent cache shared across all iterations (bulk optimization
    // mode); the default keeps every evaluation at full precision.
    double cache_quantum = 1e-9;
};

struct DescendResult {
    PiecewiseConstant schedule;
    double energy = 0;
    std::vector<double> history;  // accepted energies, non-increasing
    int iterations = 0;
    bool converged = false;
};

// Projected gradient descent on the step values, Armijo backtracking along
// the projection arc (every iterate clipped to [0,1]^N). Always returns the
// best iterate.
DescendResult descend(const OperatorPair& pair, const PiecewiseConstant& schedule0,
                      const Eigen::VectorXcd& initial, const DescendConfig& config = {});

struct BabDecomposition {
    double initial_bang = 0;  // leading u <= eps span
    double final_bang = 0;    // trailing u >= 1-eps span
    double interior_start = 0, interior_end = 0;
    int oscillation_count = 0;
    double mean_period = 0;
    std::vector<double> base_t, base_u;  // moving-average base curve of the interior
    bool available = false;
};

// Bang/oscillation structure of a piecewise-constant schedule: bang spans by
// threshold, interior detrended by a moving average sized from the dominant
// discrete-spectrum period, oscillations counted by zero crossings.
BabDecomposition detect_bab(const PiecewiseConstant& schedule, double eps_bang = 0.02);

struct PhaseCheckReport {
    double theta = 0;          // adiabatic-frame mixing integral over the window
    double integrand_l1 = 0;
    double lag_u = 0;          // |phase(u) - phase(sgn(gamma) cos varphi)| in [0, pi]
    double lag_udot = 0;
    double min_two_level_pop = 0;
    bool two_level_ok = false;  // min pop0+pop1 > 0.95 over the window
    bool available = false;     // lags computed (enough usable samples)
};

// Phase diagnostics along a sector evolution trace with populations
// tracked. The analysis window is the detected interior trimmed by one
// oscillation period per side (the shoulders adjoining the bangs are not
// two-level), keeping samples with pop0+pop1 >= 0.5; two_level_ok reports
// whether the strict two-level precondition held on the window. The
// correlations use the gauge-invariant sgn(gamma) cos(varphi) built from
// the trace's own continued frame.
PhaseCheckReport oscillation_phase_check(const OperatorPair& pair,
                                         const PiecewiseConstant& schedule,
                                         const EvolutionTrace& trace);

}  // namespace aqopt

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "aqopt/evolve.hpp"
#include "aqopt/operators.hpp"
#include "aqopt/qaoa.hpp"
#include "aqopt/schedule.hpp"

namespace aqopt {

enum class BabVariant { FixedFreq, FreeFreq, PerLayerFreq, VariableLength };

std::string to_string(BabVariant variant);

struct BabParams {
    double gamma_bang = 0;  // initial u=0 bang
    double beta_bang = 0;   // final u=1 bang
    double amplitude = 0;   // oscillation amplitude A
    double omega = 0;       // rad/time (cosine convention A cos(w t + phi))
    double phi = 0;
    double total_time = 0;
    BabVariant variant = BabVariant::FreeFreq;
};

// u=0 on [0, gamma_bang], rescaled base curve + A cos(omega t + phi) on the
// interior, u=1 on the tail. layer_durations (when given) switch the
// oscillation to one period per layer (PerLayerFreq).
BabComposite construct_ansatz(const Curve& base, const BabParams& params,
                              const std::vector<double>* layer_durations = nullptr);

struct BabConfig {
    int restarts = 8;
    uint64_t seed = 1;
    int max_evals = 360;    // per restart
    int sample_steps = 420; // schedule resolution for objective evaluations
    int final_steps = 1200; // resolution for the reported energy
    double cache_quantum = 1e-3;  // objective-loop decomposition grid
    int threads = 1;
};

struct BabResult {
    BabParams params;
    double energy = 0;          // exact re-evaluation of the best parameters
    double clamp_fraction = 0;  // of the final sampled schedule
    bool degenerate = false;    // every restart clamp-dominated (> 20%)
    BabComposite schedule;
};

// Derivative-free optimization of the variant's free parameters against the
// evolved final energy. p is the layer count of the base curve (pins the
// FixedFreq frequency and the initial guess). `init`, when given, replaces
// restart 0's starting point (e.g. to warm-start one variant from
// another's optimum).
BabResult optimize_bab(const OperatorPair& pair, const Curve& base, double t_qaoa, int p,
                       BabVariant variant, const BabConfig& config,
                       const std::vector<double>* layer_durations = nullptr,
                       const BabParams* init = nullptr);

struct BaselineEnergies {
    double linear = 0;
    double basic = 0;
    double sine = 0;
    double sine_amplitude = 0;
};

// Linear ramp, plain resampled base curve, and base curve plus a sine with
// period T/p whose amplitude is the single optimized parameter.
BaselineEnergies baseline_protocols(const OperatorPair& pair, const Curve& base, double total_time,
                                    int p, const BabConfig& config = {});

struct Table1Report {
    double ground = 0;
    double linear = 0, basic = 0, sine = 0;
    double qaoa = 0, bab = 0, gd = 0;
    bool ordering_ok = false;
    double ordering_slack = 0.02;
    QaoaAngles qaoa_angles;
    BabParams bab_params;
    std::vector<std::string> flags;  // per-stage non-convergence notes
};

struct Table1Config {
    int qaoa_restarts = 8;
    int bab_restarts = 8;
    int gd_grid = 420;
    int gd_iters = 120;
    int threads = 1;
};

// Full comparison pipeline at depth p: bootstrapped QAOA, curve extraction,
// the three baselines, the BAB ansatz, and gradient descent at the QAOA
// runtime, with the energy-ordering verdict.
Table1Report table1_experiment(const ProblemInstance& instance, int p, uint64_t seed,
                               const Table1Config& config = {});

}  // namespace aqopt

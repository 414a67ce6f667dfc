#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "aqopt/evolve.hpp"
#include "aqopt/operators.hpp"
#include "aqopt/schedule.hpp"

namespace aqopt {

// Layer-ratio curve u_i = beta_i/(beta_i+gamma_i) plotted against the
// normalized layer index s_i = (i-1)/(p-1).
struct QaoaCurve {
    std::vector<double> s;
    std::vector<double> u;
    std::vector<double> layer_durations;  // gamma_i + beta_i

    Curve to_curve() const;
};

struct QaoaConfig {
    int restarts = 8;
    uint64_t seed = 1;
    int max_evals = 0;  // per restart; 0 -> 320 * (dims + 1)
    bool fixed_layer_time = false;  // shared gamma_i+beta_i, p+1 parameters
    int threads = 1;
    bool polish = true;  // coordinate polish after the simplex
};

struct QaoaResult {
    QaoaAngles angles;
    double energy = 0;
    bool converged = false;
    int evals = 0;
};

// Multi-start simplex over nonnegative angles (|x| reparametrization).
// Deterministic for fixed (instance, p, config): restarts use derived
// seeds and the best result is chosen by (energy, restart index).
// `init`, when given, becomes restart 0's starting point.
QaoaResult optimize_qaoa(const OperatorPair& pair, int p, const QaoaConfig& config,
                         const QaoaAngles* init = nullptr);

// Depth-p solution -> depth-(p+1) initial guess: linear interpolation of
// the per-layer durations onto the finer layer grid (per-layer durations
// are preserved, so total time grows by (p+1)/p).
QaoaAngles bootstrap_angles(const QaoaAngles& prev);

// Bootstrapped sweep p = 1..p_max; result[k] is depth k+1. Each depth seeds
// restart 0 with the interpolated previous solution and also tries the
// previous solution padded with a zero layer, which makes the optimum
// non-increasing in p.
std::vector<QaoaResult> qaoa_depth_sweep(const OperatorPair& pair, int p_max,
                                         const QaoaConfig& config);

QaoaCurve extract_curve(const QaoaAngles& angles);

// L2 distance of the linear interpolants on s in [0,1].
double curve_distance(const QaoaCurve& a, const QaoaCurve& b);
double curve_distance(const Curve& a, const Curve& b);

}  // namespace aqopt

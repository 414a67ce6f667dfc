#include "aqopt/qaoa.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

#include "aqopt/errors.hpp"
#include "aqopt/parallel.hpp"
#include "aqopt/rng.hpp"
#include "aqopt/simplex.hpp"

namespace aqopt {

namespace {

QaoaAngles decode_free(const std::vector<double>& x, int p) {
    QaoaAngles angles;
    angles.gammas.resize(p);
    angles.betas.resize(p);
    for (int i = 0; i < p; ++i) {
        angles.gammas[i] = std::abs(x[i]);
        angles.betas[i] = std::abs(x[p + i]);
    }
    return angles;
}

// Triangle-wave fold of x into [0,1].
double fold01(double x) {
    double t = std::fmod(std::abs(x), 2.0);
    return t <= 1.0 ? t : 2.0 - t;
}

QaoaAngles decode_fixed_layer(const std::vector<double>& x, int p) {
    const double layer_time = std::abs(x[0]);
    QaoaAngles angles;
    angles.gammas.resize(p);
    angles.betas.resize(p);
    for (int i = 0; i < p; ++i) {
        const double ratio = fold01(x[1 + i]);
        angles.betas[i] = ratio * layer_time;
        angles.gammas[i] = (1.0 - ratio) * layer_time;
    }
    return angles;
}

std::vector<double> encode_free(const QaoaAngles& angles) {
    std::vector<double> x;
    x.reserve(2 * angles.p());
    for (double g : angles.gammas) x.push_back(g);
    for (double b : angles.betas) x.push_back(b);
    return x;
}

std::vector<double> encode_fixed_layer(const QaoaAngles& angles) {
    const int p = angles.p();
    double layer_time = angles.total_time() / p;
    std::vector<double> x(1 + p);
    x[0] = layer_time;
    for (int i = 0; i < p; ++i) {
        const double dur = angles.gammas[i] + angles.betas[i];
        x[1 + i] = dur > 0 ? angles.betas[i] / dur : 0.5;
    }
    return x;
}

// Ramp seed: mixer-dominated early layers, problem-dominated late layers,
// the shape every instance's optimum follows.
QaoaAngles ramp_seed(int p, double layer_time) {
    QaoaAngles angles;
    angles.gammas.resize(p);
    angles.betas.resize(p);
    for (int i = 0; i < p; ++i) {
        const double s = p > 1 ? static_cast<double>(i) / (p - 1) : 0.5;
        const double ratio = 0.85 - 0.7 * s;  // beta share of the layer
        angles.betas[i] = layer_time * ratio;
        angles.gammas[i] = layer_time * (1.0 - ratio);
    }
    return angles;
}

}  // namespace

Curve QaoaCurve::to_curve() const {
    Curve curve;
    curve.s = s;
    curve.v = u;
    return curve;
}

QaoaResult optimize_qaoa(const OperatorPair& pair, int p, const QaoaConfig& config,
                         const QaoaAngles* init) {
    if (p < 1) throw ValidationError("optimize_qaoa: p must be >= 1");
    const Eigen::VectorXcd plus = uniform_plus_state(pair);
    const int dims = config.fixed_layer_time ? p + 1 : 2 * p;
    // Superlinear budget: simplex refinement in high dimension needs far
    // more than proportional evaluations to reach the asymptotic curve.
    const int max_evals =
        config.max_evals > 0 ? config.max_evals : (dims + 1) * (260 + 14 * dims);

    auto objective = [&](const std::vector<double>& x) {
        const QaoaAngles angles =
            config.fixed_layer_time ? decode_fixed_layer(x, p) : decode_free(x, p);
        return energy_expectation(pair, apply_qaoa(pair, angles, plus));
    };

    const int restarts = std::max(1, config.restarts);
    std::vector<SimplexResult> results(restarts);

    parallel_for(restarts, config.threads, [&](int r) {
        std::vector<double> x0;
        if (r == 0 && init) {
            x0 = config.fixed_layer_time ? encode_fixed_layer(*init) : encode_free(*init);
        } else if (r == 0 || r == 1) {
            const double layer_time = r == 0 ? 0.6 : 0.75;
            const QaoaAngles seed = ramp_seed(p, layer_time);
            x0 = config.fixed_layer_time ? encode_fixed_layer(seed) : encode_free(seed);
        } else {
            Xoshiro256StarStar rng(derive_seed(config.seed, static_cast<uint64_t>(r)));
            x0.resize(dims);
            if (config.fixed_layer_time) {
                x0[0] = rng.uniform(0.4, 1.1);
                for (int i = 1; i < dims; ++i) x0[i] = rng.uniform(0.0, 1.0);
            } else {
                for (int i = 0; i < dims; ++i) x0[i] = rng.uniform(0.0, 0.9);
            }
        }
        SimplexOptions opts;
        opts.max_evals = max_evals;
        opts.init_step = 0.2;
        SimplexResult res = nelder_mead(objective, x0, opts);
        if (config.polish) {
            SimplexResult polished = coordinate_polish(objective, res.x, 0.15);
            if (polished.value < res.value) {
                polished.converged = res.converged;
                polished.evals += res.evals;
                res = polished;
            } else {
                res.evals += polished.evals;
            }
        }
        results[r] = std::move(res);
    });

    int best = 0;
    for (int r = 1; r < restarts; ++r)
        if (results[r].value < results[best].value) best = r;

    QaoaResult out;
    out.angles = config.fixed_layer_time ? decode_fixed_layer(results[best].x, p)
                                         : decode_free(results[best].x, p);
    out.energy = results[best].value;
    out.converged = results[best].converged;
    for (const auto& r : results) out.evals += r.evals;
    return out;
}

QaoaAngles bootstrap_angles(const QaoaAngles& prev) {
    prev.validate();
    const int p = prev.p();
    if (p < 2) throw ValidationError("bootstrap_angles: need p >= 2");
    const int q = p + 1;
    QaoaAngles next;
    next.gammas.resize(q);
    next.betas.resize(q);
    for (int i = 0; i < q; ++i) {
        const double s = static_cast<double>(i) / (q - 1);
        const double pos = s * (p - 1);
        const int j = std::min(static_cast<int>(pos), p - 2);
        const double w = pos - j;
        next.gammas[i] = (1.0 - w) * prev.gammas[j] + w * prev.gammas[j + 1];
        next.betas[i] = (1.0 - w) * prev.betas[j] + w * prev.betas[j + 1];
    }
    return next;
}

std::vector<QaoaResult> qaoa_depth_sweep(const OperatorPair& pair, int p_max,
                                         const QaoaConfig& config) {
    std::vector<QaoaResult> sweep;
    sweep.reserve(p_max);
    for (int p = 1; p <= p_max; ++p) {
        QaoaConfig cfg = config;
        cfg.seed = derive_seed(config.seed, 1000 + static_cast<uint64_t>(p));
        QaoaResult result;
        if (p == 1) {
            result = optimize_qaoa(pair, p, cfg);
        } else {
            const QaoaAngles& prev = sweep.back().angles;
            QaoaAngles guess;
            if (p == 2) {
                guess.gammas = {prev.gammas[0], prev.gammas[0]};
                guess.betas = {prev.betas[0], prev.betas[0]};
            } else {
                guess = bootstrap_angles(prev);
            }
            result = optimize_qaoa(pair, p, cfg, &guess);

            // Second start from the zero-padded previous solution, whose
            // energy equals the previous optimum, so the sweep never
            // regresses with depth.
            QaoaAngles padded = prev;
            padded.gammas.push_back(0.0);
            padded.betas.push_back(0.0);
            QaoaConfig cfg_pad = cfg;
            cfg_pad.restarts = 1;
            cfg_pad.seed = derive_seed(config.seed, 2000 + static_cast<uint64_t>(p));
            const QaoaResult from_padded = optimize_qaoa(pair, p, cfg_pad, &padded);
            if (from_padded.energy < result.energy) result = from_padded;
        }
        sweep.push_back(std::move(result));
    }
    return sweep;
}

QaoaCurve extract_curve(const QaoaAngles& angles) {
    angles.validate();
    const int p = angles.p();
    if (p < 2) throw ValidationError("extract_curve: need p >= 2");
    QaoaCurve curve;
    curve.s.resize(p);
    curve.u.resize(p);
    curve.layer_durations.resize(p);
    for (int i = 0; i < p; ++i) {
        const double dur = angles.gammas[i] + angles.betas[i];
        if (!(dur > 0))
            throw ValidationError("extract_curve: zero-duration layer " + std::to_string(i));
        curve.s[i] = static_cast<double>(i) / (p - 1);
        curve.u[i] = angles.betas[i] / dur;
        curve.layer_durations[i] = dur;
    }
    return curve;
}

double curve_distance(const Curve& a, const Curve& b) {
    a.validate();
    b.validate();
    std::vector<double> knots;
    knots.reserve(a.s.size() + b.s.size() + 2);
    knots.push_back(0.0);
    for (double s : a.s)
        if (s > 0.0 && s < 1.0) knots.push_back(s);
    for (double s : b.s)
        if (s > 0.0 && s < 1.0) knots.push_back(s);
    knots.push_back(1.0);
    std::sort(knots.begin(), knots.end());
    knots.erase(std::unique(knots.begin(), knots.end()), knots.end());

    // Piecewise linear difference: Simpson is exact on each subinterval.
    double acc = 0;
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
        const double lo = knots[i], hi = knots[i + 1], mid = 0.5 * (lo + hi);
        const double dlo = a.at(lo) - b.at(lo);
        const double dmid = a.at(mid) - b.at(mid);
        const double dhi = a.at(hi) - b.at(hi);
        acc += (hi - lo) / 6.0 * (dlo * dlo + 4.0 * dmid * dmid + dhi * dhi);
    }
    return std::sqrt(acc);
}

double curve_distance(const QaoaCurve& a, const QaoaCurve& b) {
    return curve_distance(a.to_curve(), b.to_curve());
}

}  // namespace aqopt

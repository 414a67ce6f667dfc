#include <doctest.h>

#include <cmath>
#include <numbers>

#include "aqopt/bab.hpp"
#include "aqopt/errors.hpp"
#include "aqopt/instance.hpp"
#include "aqopt/operators.hpp"

using namespace aqopt;

namespace {

Curve flat_base(double v) {
    Curve c;
    c.s = {0.0, 1.0};
    c.v = {v, v};
    return c;
}

}  // namespace

TEST_CASE("ansatz construction") {
    SUBCASE("no bangs, no oscillation reduces to the base curve") {
        BabParams params;
        params.total_time = 2.0;
        params.variant = BabVariant::FixedFreq;
        params.omega = 1.0;
        Curve base;
        base.s = {0.0, 1.0};
        base.v = {0.9, 0.1};
        const auto comp = construct_ansatz(base, params);
        const auto sampled = sample_schedule(comp, 8);
        for (int k = 0; k < 8; ++k) {
            const double s = (k + 0.5) / 8.0;
            CHECK(sampled.pc.values[k] == doctest::Approx(0.9 - 0.8 * s).epsilon(1e-14));
        }
    }
    SUBCASE("piecewise plateaus") {
        BabParams params;
        params.total_time = 2.0;
        params.gamma_bang = 0.5;
        params.beta_bang = 0.3;
        params.omega = 1.0;
        const auto comp = construct_ansatz(flat_base(0.5), params);
        CHECK(comp.value(0.25) == 0.0);
        CHECK(comp.value(1.0) == 0.5);
        CHECK(comp.value(1.85) == 1.0);
    }
    SUBCASE("pinned frequency completes p oscillations") {
        const double T = 3.7;
        const int p = 6;
        BabParams params;
        params.total_time = T;
        params.variant = BabVariant::FixedFreq;
        params.amplitude = 0.05;
        params.omega = 2.0 * std::numbers::pi * p / T;
        CHECK(params.omega * T == doctest::Approx(2.0 * std::numbers::pi * p).epsilon(1e-15));
        const auto comp = construct_ansatz(flat_base(0.5), params);
        // the oscillatory part at t and t + T/p agree (one full period)
        const double t1 = 0.9, t2 = 0.9 + T / p;
        CHECK(comp.value(t1) == doctest::Approx(comp.value(t2)).epsilon(1e-12));
    }
    SUBCASE("bangs must leave an interior") {
        BabParams params;
        params.total_time = 1.0;
        params.gamma_bang = 0.6;
        params.beta_bang = 0.5;
        CHECK_THROWS_AS(construct_ansatz(flat_base(0.5), params), ValidationError);
    }
    SUBCASE("per-layer frequency needs layer durations") {
        BabParams params;
        params.total_time = 1.0;
        params.variant = BabVariant::PerLayerFreq;
        params.amplitude = 0.1;
        CHECK_THROWS_AS(construct_ansatz(flat_base(0.5), params), ValidationError);
        const std::vector<double> layers = {0.4, 0.3, 0.3};
        const auto comp = construct_ansatz(flat_base(0.5), params, &layers);
        CHECK(comp.layer_periods == layers);
    }
}

TEST_CASE("zero-coupling instance optimizes to zero") {
    ProblemInstance inst;
    inst.n = 3;
    inst.coupling = Eigen::MatrixXd::Zero(3, 3);
    const auto pair = build_operators(inst);
    BabConfig cfg;
    cfg.restarts = 1;
    cfg.max_evals = 40;
    cfg.sample_steps = 60;
    cfg.final_steps = 60;
    const auto result = optimize_bab(pair, flat_base(0.5), 2.0, 2, BabVariant::FreeFreq, cfg);
    CHECK(result.energy == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("variant parameter spaces nest") {
    const auto pair = build_operators(random_instance(5, 23));
    const Curve base = flat_base(0.6);
    BabConfig cfg;
    cfg.restarts = 2;
    cfg.seed = 4;
    cfg.max_evals = 120;
    cfg.sample_steps = 160;
    cfg.final_steps = 160;

    const auto fixed = optimize_bab(pair, base, 3.0, 3, BabVariant::FixedFreq, cfg);
    const auto free_from_fixed = optimize_bab(pair, base, 3.0, 3, BabVariant::FreeFreq, cfg,
                                              nullptr, &fixed.params);
    CHECK(free_from_fixed.energy <= fixed.energy + 1e-6);

    SUBCASE("plain interpolation is the A=0 bang-free point") {
        Curve sloped;
        sloped.s = {0.0, 1.0};
        sloped.v = {0.85, 0.15};
        BabParams plain;
        plain.total_time = 3.0;
        plain.variant = BabVariant::FixedFreq;
        plain.omega = 2.0 * std::numbers::pi;
        const auto sampled = sample_schedule(construct_ansatz(sloped, plain), 160);
        for (int k = 0; k < 160; ++k) {
            const double s = (k + 0.5) / 160.0;
            CHECK(sampled.pc.values[k] == doctest::Approx(sloped.at(s)).epsilon(1e-14));
        }
    }
}

TEST_CASE("baselines order sine below basic") {
    const auto pair = build_operators(random_instance(5, 29));
    Curve base;
    base.s = {0.0, 0.5, 1.0};
    base.v = {0.8, 0.5, 0.2};
    BabConfig cfg;
    cfg.final_steps = 300;
    const auto baselines = baseline_protocols(pair, base, 3.0, 3, cfg);
    CHECK(baselines.sine <= baselines.basic + 1e-9);
    CHECK(std::isfinite(baselines.linear));
}

TEST_CASE("fresh-instance pipeline preserves the method ordering") {
    // 6-qubit random instance: the gradient-descent refinement beats the
    // ansatz, which beats the circuit it was seeded from.
    const auto inst = random_instance(6, 91);
    Table1Config cfg;
    cfg.threads = 2;
    cfg.qaoa_restarts = 6;
    cfg.bab_restarts = 6;
    cfg.gd_grid = 300;
    cfg.gd_iters = 80;
    const auto report = table1_experiment(inst, 5, 11, cfg);
    const double slack = 0.02;
    CHECK(report.gd <= report.bab + slack);
    CHECK(report.bab <= report.qaoa + slack);
    CHECK(report.ground <= report.gd + slack);
}

#include <doctest.h>

#include <cmath>
#include <numbers>

#include "aqopt/errors.hpp"
#include "aqopt/instance.hpp"
#include "aqopt/operators.hpp"
#include "aqopt/optimal_control.hpp"
#include "aqopt/rng.hpp"

using namespace aqopt;

namespace {

PiecewiseConstant random_schedule(double t_f, int steps, uint64_t seed) {
    Xoshiro256StarStar rng(seed);
    PiecewiseConstant pc;
    pc.t_f = t_f;
    pc.values.resize(steps);
    for (auto& v : pc.values) v = rng.uniform(0.05, 0.95);
    return pc;
}

double finite_difference(const OperatorPair& pair, PiecewiseConstant pc,
                         const Eigen::VectorXcd& psi, int k, double h) {
    EvolveOptions opts;
    opts.record_trace = false;
    opts.track_populations = false;
    pc.values[k] += h;
    const double up = evolve(pair, pc, psi, opts).final_energy;
    pc.values[k] -= 2 * h;
    const double dn = evolve(pair, pc, psi, opts).final_energy;
    return (up - dn) / (2 * h);
}

}  // namespace

TEST_CASE("gradient vanishes when the pencil is flat") {
    // H(u) = u B + (1-u) C with B == C == 0 has no u dependence at all.
    ProblemInstance inst;
    inst.n = 2;
    inst.coupling = Eigen::MatrixXd::Zero(2, 2);
    auto pair = build_operators(inst);
    pair.b_full.setZero();
    pair.b_sector.setZero();
    pair.bc_sector.setZero();

    const auto pc = random_schedule(1.5, 12, 3);
    const auto grad = control_gradient(pair, pc, sector_plus_state(pair));
    for (double g : grad.values) CHECK(g == 0.0);
}

TEST_CASE("adjoint gradient matches central differences") {
    const auto pair = build_operators(random_instance(2, 5));
    const auto pc = random_schedule(2.0, 30, 8);
    const auto psi = sector_plus_state(pair);
    const auto grad = control_gradient(pair, pc, psi);
    REQUIRE(grad.values.size() == 30);
    for (int probe = 0; probe < 10; ++probe) {
        const int k = (probe * 7) % 30;
        const double fd = finite_difference(pair, pc, psi, k, 1e-6);
        CHECK(std::abs(grad.values[k] - fd) <= 1e-5 * std::max(1e-8, std::abs(fd)));
    }

    SUBCASE("full-space gradient agrees too") {
        const auto grad_full = control_gradient(pair, pc, uniform_plus_state(pair));
        for (int k : {0, 11, 29}) {
            const double fd = finite_difference(pair, pc, uniform_plus_state(pair), k, 1e-6);
            CHECK(std::abs(grad_full.values[k] - fd) <= 1e-5 * std::max(1e-8, std::abs(fd)));
        }
    }
    SUBCASE("resolution mismatch is rejected") {
        Eigen::VectorXcd bad = Eigen::VectorXcd::Ones(3).normalized();
        CHECK_THROWS_AS(control_gradient(pair, pc, bad), ValidationError);
    }
}

TEST_CASE("descent is monotone, projected, and stationary at an optimum") {
    const auto pair = build_operators(random_instance(3, 19));
    const auto psi = sector_plus_state(pair);

    SUBCASE("one-step problem started at its optimum does not move") {
        // golden-section the scalar objective first
        EvolveOptions opts;
        opts.record_trace = false;
        opts.track_populations = false;
        auto energy_of = [&](double u) {
            PiecewiseConstant pc;
            pc.t_f = 1.0;
            pc.values = {u};
            return evolve(pair, pc, psi, opts).final_energy;
        };
        double lo = 0, hi = 1;
        const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
        double a = hi - inv_phi * (hi - lo), b = lo + inv_phi * (hi - lo);
        double fa = energy_of(a), fb = energy_of(b);
        for (int i = 0; i < 60; ++i) {
            if (fa < fb) {
                hi = b; b = a; fb = fa; a = hi - inv_phi * (hi - lo); fa = energy_of(a);
            } else {
                lo = a; a = b; fa = fb; b = lo + inv_phi * (hi - lo); fb = energy_of(b);
            }
        }
        const double u_star = fa < fb ? a : b;
        PiecewiseConstant pc;
        pc.t_f = 1.0;
        pc.values = {u_star};
        const auto result = descend(pair, pc, psi, {});
        CHECK(result.energy <= energy_of(u_star));
        CHECK(energy_of(u_star) - result.energy < 1e-9);
    }

    SUBCASE("history is non-increasing and iterates stay in the box") {
        PiecewiseConstant ramp;
        ramp.t_f = 2.5;
        ramp.values.resize(40);
        for (int k = 0; k < 40; ++k) ramp.values[k] = 1.0 - (k + 0.5) / 40.0;
        DescendConfig cfg;
        cfg.max_iters = 60;
        const auto result = descend(pair, ramp, psi, cfg);
        for (std::size_t i = 1; i < result.history.size(); ++i)
            CHECK(result.history[i] <= result.history[i - 1] + 1e-12);
        for (double v : result.schedule.values) {
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
        }
        CHECK(result.energy < result.history.front());

        // at the returned point, unconstrained components are near-stationary
        const auto grad = control_gradient(pair, result.schedule, psi);
        if (result.converged) {
            for (std::size_t k = 0; k < grad.values.size(); ++k) {
                const double v = result.schedule.values[k];
                if (v > 1e-6 && v < 1.0 - 1e-6) CHECK(std::abs(grad.values[k]) < 1e-4);
            }
        }
    }
}

TEST_CASE("bang and oscillation structure detection") {
    SUBCASE("constructed signal recovers its parameters") {
        PiecewiseConstant pc;
        pc.t_f = 10.0;
        const int n = 2000;
        pc.values.resize(n);
        const double bang0 = 1.0, bang1 = 0.8;
        for (int k = 0; k < n; ++k) {
            const double t = (k + 0.5) * pc.t_f / n;
            if (t < bang0)
                pc.values[k] = 0.0;
            else if (t > pc.t_f - bang1)
                pc.values[k] = 1.0;
            else
                pc.values[k] =
                    0.5 + 0.1 * std::sin(2.0 * std::numbers::pi * 14.0 * t / pc.t_f);
        }
        const auto bab = detect_bab(pc);
        REQUIRE(bab.available);
        CHECK(bab.oscillation_count == 14);
        CHECK(std::abs(bab.initial_bang - bang0) <= pc.t_f / n + 1e-12);
        CHECK(std::abs(bab.final_bang - bang1) <= pc.t_f / n + 1e-12);
    }
    SUBCASE("flat interior counts zero oscillations") {
        PiecewiseConstant pc;
        pc.t_f = 4.0;
        pc.values.assign(800, 0.5);
        const auto bab = detect_bab(pc);
        CHECK(bab.oscillation_count == 0);
        CHECK(bab.initial_bang == 0.0);
        CHECK(bab.final_bang == 0.0);
    }
    SUBCASE("interior too short for analysis") {
        PiecewiseConstant pc;
        pc.t_f = 1.0;
        pc.values.assign(100, 0.0);
        pc.values[50] = 0.5;  // one interior sample
        const auto bab = detect_bab(pc);
        CHECK_FALSE(bab.available);
    }
}

TEST_CASE("initial bangs shrink as the protocol time grows") {
    const auto pair = build_operators(benchmark8_instance());
    const auto psi = sector_plus_state(pair);
    DescendConfig cfg;
    cfg.max_iters = 120;
    cfg.cache_quantum = 1e-3;

    auto descended_initial_bang = [&](double t_f, int grid) {
        PiecewiseConstant ramp;
        ramp.t_f = t_f;
        ramp.values.resize(grid);
        for (int k = 0; k < grid; ++k) ramp.values[k] = 1.0 - (k + 0.5) / grid;
        const auto result = descend(pair, ramp, psi, cfg);
        return std::make_pair(detect_bab(result.schedule).initial_bang, t_f / grid);
    };
    const auto [bang_short, step_short] = descended_initial_bang(4.5, 300);
    const auto [bang_long, step_long] = descended_initial_bang(6.5, 300);
    CHECK(bang_long <= bang_short + std::max(step_short, step_long) + 1e-12);
}

TEST_CASE("phase check on a flat schedule reports zero mixing") {
    const auto pair = build_operators(benchmark8_instance());
    PiecewiseConstant pc;
    pc.t_f = 3.0;
    pc.values.assign(600, 0.5);
    EvolveOptions opts;
    opts.dt_max = pc.t_f / 600;
    const auto trace = evolve(pair, pc, sector_plus_state(pair), opts);
    const auto report = oscillation_phase_check(pair, pc, trace);
    CHECK(report.theta == doctest::Approx(0.0).epsilon(1e-10));
}

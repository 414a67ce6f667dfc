#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "aqopt/errors.hpp"
#include "aqopt/evolve.hpp"
#include "aqopt/instance.hpp"
#include "aqopt/operators.hpp"
#include "aqopt/rng.hpp"
#include "aqopt/schedule.hpp"
#include "aqopt/xcheck.hpp"

using namespace aqopt;

namespace {

Eigen::VectorXcd random_state(long dim, uint64_t seed) {
    Xoshiro256StarStar rng(seed);
    Eigen::VectorXcd psi(dim);
    for (long i = 0; i < dim; ++i)
        psi(i) = std::complex<double>(rng.uniform(-1, 1), rng.uniform(-1, 1));
    psi.normalize();
    return psi;
}

}  // namespace

TEST_CASE("schedule sampling") {
    SUBCASE("piecewise constant resamples to itself at native resolution") {
        PiecewiseConstant pc;
        pc.t_f = 2.0;
        pc.values = {0.1, 0.9, 0.4, 0.7};
        const auto sampled = sample_schedule(pc, 4);
        CHECK(sampled.pc.values == pc.values);
        CHECK(sampled.clamp_count == 0);
    }
    SUBCASE("plain composite reduces to the resampled base curve") {
        BabComposite comp;
        comp.t_f = 1.0;
        comp.base.s = {0.0, 1.0};
        comp.base.v = {0.8, 0.2};
        const auto sampled = sample_schedule(comp, 10);
        for (int k = 0; k < 10; ++k) {
            const double s = (k + 0.5) / 10.0;
            CHECK(sampled.pc.values[k] == doctest::Approx(0.8 - 0.6 * s).epsilon(1e-14));
        }
    }
    SUBCASE("composite matches the pointwise formula") {
        BabComposite comp;
        comp.t_f = 3.0;
        comp.gamma_bang = 0.3;
        comp.beta_bang = 0.45;
        comp.base.s = {0.0, 0.5, 1.0};
        comp.base.v = {0.7, 0.45, 0.3};
        comp.osc = OscillationParams::from_cosine(0.07, 9.0, 0.4);
        const auto sampled = sample_schedule(comp, 1000);
        const double anneal = comp.t_f - comp.gamma_bang - comp.beta_bang;
        for (int k = 0; k < 1000; ++k) {
            const double t = (k + 0.5) * comp.t_f / 1000;
            double expected;
            if (t <= comp.gamma_bang) {
                expected = 0.0;
            } else if (t >= comp.t_f - comp.beta_bang) {
                expected = 1.0;
            } else {
                const double s = (t - comp.gamma_bang) / anneal;
                expected = comp.base.at(s) + 0.07 * std::cos(9.0 * t + 0.4);
            }
            CHECK(sampled.pc.values[k] == doctest::Approx(expected).epsilon(1e-12));
        }
        CHECK(sampled.clamp_count == 0);

        // bang plateaus are exact
        CHECK(sampled.pc.values.front() == 0.0);
        CHECK(sampled.pc.values.back() == 1.0);
    }
    SUBCASE("out-of-range samples clamp and count") {
        BabComposite comp;
        comp.t_f = 1.0;
        comp.base.s = {0.0, 1.0};
        comp.base.v = {0.95, 0.9};
        comp.osc = OscillationParams::from_cosine(0.3, 40.0, 0.0);
        const auto sampled = sample_schedule(comp, 200);
        CHECK(sampled.clamp_count > 0);
        for (double v : sampled.pc.values) {
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
        }
    }
}

TEST_CASE("pure problem-Hamiltonian schedule keeps the cost constant") {
    const auto pair = build_operators(random_instance(4, 9));
    PiecewiseConstant pc;
    pc.t_f = 1.7;
    pc.values.assign(8, 0.0);
    const auto psi0 = random_state(pair.dim, 5);
    const auto trace = evolve(pair, pc, psi0);
    for (double e : trace.energy)
        CHECK(e == doctest::Approx(trace.energy.front()).epsilon(1e-12));
}

TEST_CASE("pure mixer schedule keeps the uniform state stationary") {
    const auto pair = build_operators(random_instance(3, 10));
    PiecewiseConstant pc;
    pc.t_f = 2.0;
    pc.values.assign(10, 1.0);
    const auto trace = evolve(pair, pc, uniform_plus_state(pair));
    for (double p : trace.pop0) CHECK(p == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("unitarity and energy bounds hold along evolutions") {
    const auto pair = build_operators(benchmark8_instance());
    BabComposite comp;
    comp.t_f = 4.0;
    comp.gamma_bang = 0.2;
    comp.beta_bang = 0.2;
    comp.base.s = {0.0, 1.0};
    comp.base.v = {0.85, 0.15};
    comp.osc = OscillationParams::from_cosine(0.1, 2.0 * std::numbers::pi * 5 / 4.0, 0.0);
    const auto trace = evolve(pair, comp, sector_plus_state(pair));
    CHECK(trace.max_norm_drift < 1e-10);
    const double lo = pair.c_diag.minCoeff(), hi = pair.c_diag.maxCoeff();
    for (double e : trace.energy) {
        CHECK(e >= lo - 1e-9);
        CHECK(e <= hi + 1e-9);
    }
    for (std::size_t i = 0; i < trace.pop0.size(); ++i)
        CHECK(trace.pop0[i] + trace.pop1[i] <= 1.0 + 1e-10);
}

TEST_CASE("bang sequences and the circuit fast path agree") {
    const auto pair = build_operators(random_instance(3, 31));
    QaoaAngles angles;
    angles.gammas = {0.43, 0.11, 0.72};
    angles.betas = {0.31, 0.52, 0.05};

    const auto psi0 = uniform_plus_state(pair);
    const auto direct = apply_qaoa(pair, angles, psi0);

    EvolveOptions opts;
    opts.record_trace = false;
    opts.track_populations = false;
    const auto evolved = evolve(pair, angles.to_bang_sequence(), psi0, opts);
    CHECK(std::abs(std::abs(evolved.final_state.dot(direct)) - 1.0) < 1e-10);

    // and against the independent exponential oracle
    const auto oracle = xcheck::oracle_expm_evolve(pair, angles.to_bang_sequence(), 0, psi0);
    CHECK(std::abs(std::abs(oracle.dot(direct)) - 1.0) < 1e-10);
}

TEST_CASE("single-layer circuit against a dense exponential oracle") {
    const auto pair = build_operators(random_instance(2, 77));
    QaoaAngles angles;
    angles.gammas = {0.4};
    angles.betas = {0.3};
    const auto psi0 = uniform_plus_state(pair);
    const auto fast = apply_qaoa(pair, angles, psi0);

    using Cplx = std::complex<double>;
    const Eigen::MatrixXcd uc =
        xcheck::oracle_expm(Cplx(0, -0.4) *
                            Eigen::MatrixXcd(pair.c_diag.cast<Cplx>().asDiagonal()));
    const Eigen::MatrixXcd ub = xcheck::oracle_expm(Cplx(0, -0.3) * pair.b_full.cast<Cplx>());
    const Eigen::VectorXcd expected = ub * (uc * psi0);
    CHECK((fast - expected).norm() < 1e-12);

    SUBCASE("zero angles are the identity") {
        QaoaAngles zero;
        zero.gammas = {0.0};
        zero.betas = {0.0};
        CHECK((apply_qaoa(pair, zero, psi0) - psi0).norm() == 0.0);
    }
    SUBCASE("negative angles are rejected") {
        QaoaAngles bad;
        bad.gammas = {-0.1};
        bad.betas = {0.3};
        CHECK_THROWS_AS(apply_qaoa(pair, bad, psi0), ValidationError);
    }
}

TEST_CASE("energy expectation") {
    const auto inst = random_instance(4, 55);
    const auto pair = build_operators(inst);
    CHECK(energy_expectation(pair, uniform_plus_state(pair)) ==
          doctest::Approx(0.0).epsilon(1e-14));

    Eigen::VectorXcd basis = Eigen::VectorXcd::Zero(pair.dim);
    basis(9) = 1.0;
    CHECK(energy_expectation(pair, basis) == inst.classical_cost(9));

    const auto psi = random_state(pair.dim, 4);
    double direct = 0;  // quadratic-form oracle
    for (long z = 0; z < pair.dim; ++z) direct += std::norm(psi(z)) * inst.classical_cost(z);
    CHECK(energy_expectation(pair, psi) == doctest::Approx(direct).epsilon(1e-13));
}

TEST_CASE("evolution input validation") {
    const auto pair = build_operators(random_instance(3, 2));
    PiecewiseConstant pc;
    pc.t_f = 1.0;
    pc.values = {0.5};
    Eigen::VectorXcd bad = uniform_plus_state(pair) * 1.5;
    CHECK_THROWS_AS(evolve(pair, pc, bad), ValidationError);

    PiecewiseConstant out_of_range;
    out_of_range.t_f = 1.0;
    out_of_range.values = {1.2};
    CHECK_THROWS_AS(evolve(pair, out_of_range, uniform_plus_state(pair)), ValidationError);
}

TEST_CASE("midpoint sampling converges at second order") {
    const auto pair = build_operators(random_instance(4, 8));
    BabComposite comp;
    comp.t_f = 3.0;
    comp.base.s = {0.0, 1.0};
    comp.base.v = {0.9, 0.1};
    comp.osc = OscillationParams::from_cosine(0.08, 2.0 * std::numbers::pi * 4 / comp.t_f, 0.0);

    EvolveOptions opts;
    opts.record_trace = false;
    opts.track_populations = false;
    auto energy_at = [&](int steps) {
        EvolveOptions o = opts;
        o.dt_max = comp.t_f / steps;
        return evolve(pair, comp, sector_plus_state(pair), o).final_energy;
    };
    const double e1 = energy_at(250), e2 = energy_at(500), e4 = energy_at(1000),
                 e8 = energy_at(2000);
    const double d12 = std::abs(e1 - e2), d24 = std::abs(e2 - e4), d48 = std::abs(e4 - e8);
    CHECK(d24 <= d12 / 3.5);  // second-order: factor ~4 per halving
    CHECK(d48 <= d24 / 3.5);
}

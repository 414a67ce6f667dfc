#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "aqopt/errors.hpp"
#include "aqopt/evolve.hpp"
#include "aqopt/instance.hpp"
#include "aqopt/operators.hpp"
#include "aqopt/rng.hpp"
#include "aqopt/xcheck.hpp"

using namespace aqopt;

namespace {

ProblemInstance two_spin(double j01) {
    ProblemInstance inst;
    inst.n = 2;
    inst.coupling = Eigen::MatrixXd::Zero(2, 2);
    inst.coupling(0, 1) = inst.coupling(1, 0) = j01;
    return inst;
}

// Global spin flip as an explicit permutation matrix.
Eigen::MatrixXd flip_operator(int n) {
    const long dim = 1L << n;
    Eigen::MatrixXd f = Eigen::MatrixXd::Zero(dim, dim);
    for (long z = 0; z < dim; ++z) f(static_cast<long>(~static_cast<uint64_t>(z) & (dim - 1)), z) = 1.0;
    return f;
}

}  // namespace

TEST_CASE("two-spin problem operator diagonal") {
    const auto pair = build_operators(two_spin(1.0));
    CHECK(pair.c_diag(0) == 1.0);   // 00
    CHECK(pair.c_diag(1) == -1.0);  // 01
    CHECK(pair.c_diag(2) == -1.0);  // 10
    CHECK(pair.c_diag(3) == 1.0);   // 11
}

TEST_CASE("uniform superposition has zero cost expectation") {
    for (uint64_t seed : {3ULL, 17ULL}) {
        const auto pair = build_operators(random_instance(5, seed));
        CHECK(energy_expectation(pair, uniform_plus_state(pair)) ==
              doctest::Approx(0.0).epsilon(1e-14));
    }
}

TEST_CASE("ground energy of the benchmark instance") {
    const double e = ground_energy(benchmark8_instance());
    CHECK(std::abs(e - (-7.214)) <= 0.02);
    CHECK(e == xcheck::oracle_ground_energy(benchmark8_instance()));
}

TEST_CASE("ground energy equals exhaustive enumeration") {
    CHECK(ground_energy(two_spin(1.0)) == -1.0);
    for (uint64_t seed : {5ULL, 6ULL, 7ULL}) {
        const auto inst = random_instance(6, seed);
        CHECK(ground_energy(inst) == xcheck::oracle_ground_energy(inst));
    }
}

TEST_CASE("operators commute with the global spin flip") {
    const auto pair = build_operators(random_instance(4, 11));
    const Eigen::MatrixXd f = flip_operator(4);
    CHECK((pair.b_full * f - f * pair.b_full).cwiseAbs().maxCoeff() == 0.0);
    const Eigen::MatrixXd c = pair.c_diag.asDiagonal();
    CHECK((c * f - f * c).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("sector restriction") {
    const auto pair3 = build_operators(random_instance(3, 1));
    CHECK(pair3.sector_dim == 4);

    // Restriction reproduces full-space spectra on symmetric states: the
    // basis change diagonalizes blockwise.
    const auto pair = build_operators(random_instance(4, 2));
    const Eigen::MatrixXd basis = pair.sector_basis();
    CHECK((basis.transpose() * basis - Eigen::MatrixXd::Identity(pair.sector_dim, pair.sector_dim))
              .cwiseAbs()
              .maxCoeff() < 1e-14);
    const Eigen::MatrixXd b_restricted = basis.transpose() * pair.b_full * basis;
    CHECK((b_restricted - pair.b_sector).cwiseAbs().maxCoeff() < 1e-13);

    // Sector evolution matches full-space evolution of the symmetric state.
    PiecewiseConstant pc;
    pc.t_f = 1.3;
    pc.values = {0.9, 0.75, 0.62, 0.5, 0.35, 0.2};
    EvolveOptions opts;
    opts.record_trace = false;
    opts.track_populations = false;
    const auto full = evolve(pair, pc, uniform_plus_state(pair), opts);
    const auto sect = evolve(pair, pc, sector_plus_state(pair), opts);
    CHECK(std::abs(full.final_energy - sect.final_energy) < 1e-10);
    const Eigen::VectorXcd mapped = to_full(pair, sect.final_state);
    CHECK((mapped - full.final_state).norm() < 1e-10);
}

TEST_CASE("spectral slice at the mixer endpoint") {
    // In-sector first excitation of the transverse field is a double spin
    // flip (single flips are odd under the global flip): gap 4. The full
    // spectrum keeps the single-flip gap 2.
    for (int n : {2, 3, 4, 8}) {
        const auto pair = build_operators(n == 8 ? benchmark8_instance() : random_instance(n, 21));
        const auto slice = spectral_slice(pair, 1.0);
        CHECK(slice.gap == doctest::Approx(4.0).epsilon(1e-12));
        const auto full = full_spectrum(pair, 1.0);
        CHECK(full(1) - full(0) == doctest::Approx(2.0).epsilon(1e-12));
    }
}

TEST_CASE("two-spin slice against the closed-form 2x2 reduction") {
    const auto pair = build_operators(two_spin(1.0));
    const auto slice = spectral_slice(pair, 0.5);

    // Pair basis {(|00>+|11>)/sqrt2, (|01>+|10>)/sqrt2}:
    // H(u) = u [[0,-2],[-2,0]] + (1-u) diag(1,-1).
    Eigen::Matrix2d h;
    h << 0.5, -1.0, -1.0, -0.5;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(h);
    const double gap = es.eigenvalues()(1) - es.eigenvalues()(0);
    CHECK(slice.gap == doctest::Approx(gap).epsilon(1e-12));
    CHECK(slice.gap == doctest::Approx(2.0 * std::sqrt(1.25)).epsilon(1e-12));
    CHECK(slice.lambdas(0) == 0.0);

    Eigen::Matrix2d bc;
    bc << -1.0, -2.0, -2.0, 1.0;
    Eigen::Vector2d v0 = es.eigenvectors().col(0), v1 = es.eigenvectors().col(1);
    if (std::abs(v0(0)) < std::abs(v0(1)) ? v0(1) < 0 : v0(0) < 0) v0 = -v0;
    if (std::abs(v1(0)) < std::abs(v1(1)) ? v1(1) < 0 : v1(0) < 0) v1 = -v1;
    CHECK(slice.gamma_me == doctest::Approx(v0.dot(bc * v1)).epsilon(1e-12));
    CHECK(slice.kappa0 == doctest::Approx(v0.dot(bc * v0)).epsilon(1e-12));
    CHECK(slice.kappa1 == doctest::Approx(v1.dot(bc * v1)).epsilon(1e-12));
}

TEST_CASE("slice structure invariants") {
    const auto pair = build_operators(benchmark8_instance());
    for (double u : {0.1, 0.37, 0.81}) {
        const auto h = pair.hamiltonian_sector(u);
        CHECK((h - h.transpose()).cwiseAbs().maxCoeff() < 1e-14);
        const auto slice = spectral_slice(pair, u);
        CHECK(slice.lambdas(0) == 0.0);
        CHECK(slice.gap > 0);
        CHECK((slice.vecs.transpose() * slice.vecs -
               Eigen::MatrixXd::Identity(pair.sector_dim, pair.sector_dim))
                  .cwiseAbs()
                  .maxCoeff() < 1e-10);
    }
    CHECK_THROWS_AS(spectral_slice(pair, 1.5), ValidationError);
}

TEST_CASE("degenerate sector slice is reported") {
    // J = 0 gives H(0) = C = 0 in the sector: fully degenerate.
    ProblemInstance inst;
    inst.n = 3;
    inst.coupling = Eigen::MatrixXd::Zero(3, 3);
    const auto pair = build_operators(inst);
    CHECK_THROWS_AS(spectral_slice(pair, 0.0), DegeneracyError);
}

TEST_CASE("spectral profile has a continuous gauge") {
    const auto pair = build_operators(benchmark8_instance());

    auto profile_gap_positive = [&](int points) {
        std::vector<double> grid(points);
        for (int i = 0; i < points; ++i) grid[i] = static_cast<double>(i) / (points - 1);
        const auto slices = spectral_profile(pair, grid);
        double min_gap = 1e300, max_jump = 0;
        for (std::size_t i = 0; i < slices.size(); ++i) {
            min_gap = std::min(min_gap, slices[i].gap);
            if (i > 0) max_jump = std::max(max_jump, std::abs(slices[i].gamma_me -
                                                              slices[i - 1].gamma_me));
        }
        return std::make_pair(min_gap, max_jump);
    };

    const auto [min_gap_200, jump_200] = profile_gap_positive(200);
    CHECK(min_gap_200 > 0);

    // Cauchy behavior under grid refinement: the largest gamma step halves
    // (no sign-flip discontinuities survive).
    const auto [mg400, jump_400] = profile_gap_positive(400);
    CHECK(jump_400 < 0.75 * jump_200);

    SUBCASE("constant grid gives identical slices") {
        const auto slices = spectral_profile(pair, {0.4, 0.4, 0.4});
        CHECK(slices[0].gamma_me == slices[1].gamma_me);
        CHECK(slices[1].gamma_me == slices[2].gamma_me);
        CHECK(slices[0].gap == slices[2].gap);
    }
}

TEST_CASE("dense-budget guard") {
    ProblemInstance inst;
    inst.n = 13;
    inst.coupling = Eigen::MatrixXd::Zero(13, 13);
    CHECK_THROWS_AS(build_operators(inst), ResourceError);
}

#pragma once

#include <Eigen/Dense>

#include "aqopt/instance.hpp"
#include "aqopt/operators.hpp"
#include "aqopt/schedule.hpp"

namespace aqopt {

// Brute-force cross-check oracles. Deliberately share no numerical path
// with the main implementations: Taylor-series exponentials instead of
// eigendecompositions, independent cost evaluation, dense unitaries.
// Test-suite and hidden-CLI use only; simplicity over speed.
namespace xcheck {

// Scaled-and-squared Taylor series with an over-provisioned term count.
Eigen::MatrixXcd oracle_expm(const Eigen::MatrixXcd& a);

// Time-ordered product of per-span Taylor exponentials in the full space.
// Bang sequences keep exact segment durations; smooth composites are
// midpoint-sampled at n_substeps. Refuses n > 6.
Eigen::VectorXcd oracle_expm_evolve(const OperatorPair& pair, const Schedule& schedule,
                                    int n_substeps, const Eigen::VectorXcd& initial);

// Exhaustive scan over all 2^n spin configurations (n <= 24).
double oracle_ground_energy(const ProblemInstance& instance);

// Spectral norm by power iteration on M^dagger M.
double oracle_spectral_norm(const Eigen::MatrixXcd& m);

// ||U - U_PF|| with U the dense time-ordered evolution (fine Taylor steps)
// and U_PF the product formula from trotterize_schedule. n <= 4.
double oracle_unitary_error(const OperatorPair& pair, const Schedule& schedule, int p);

}  // namespace xcheck
}  // namespace aqopt

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "aqopt/instance.hpp"

namespace aqopt {

// Mixer B = -sum_i X_i and diagonal problem operator C for one instance,
// together with their restriction to the +1 eigensector of the global
// spin-flip X^n (the sector containing the uniform superposition, which is
// the ground state of B). All matrices are real; H(u) = u B + (1-u) C.
struct OperatorPair {
    int n = 0;
    long dim = 0;         // 2^n
    long sector_dim = 0;  // 2^(n-1)

    Eigen::VectorXd c_diag;  // full-space C diagonal
    Eigen::MatrixXd b_full;  // full-space B, dense

    // Sector basis vector p is (|z_p> + |~z_p>)/sqrt(2) with z_p = reps[p].
    std::vector<uint64_t> reps;
    std::vector<long> sector_index;  // full basis index -> sector index
    Eigen::VectorXd c_sector;        // C restricted (diagonal in the pair basis)
    Eigen::MatrixXd b_sector;        // B restricted
    Eigen::MatrixXd bc_sector;       // b_sector - diag(c_sector)

    Eigen::MatrixXd hamiltonian_full(double u) const;
    Eigen::MatrixXd hamiltonian_sector(double u) const;

    // Basis change dim x sector_dim; columns orthonormal.
    Eigen::MatrixXd sector_basis() const;
};

// Dense operator construction; throws ResourceError when 2^n exceeds
// max_dim (default 2^12, the dense-storage budget).
OperatorPair build_operators(const ProblemInstance& instance, long max_dim = 1L << 12);

// Minimum of the 2^n diagonal cost values.
double ground_energy(const ProblemInstance& instance);

// Instantaneous eigen-data of the sector-restricted H(u), eigenvalues
// shifted so lambdas[0] == 0. Eigenvector gauge: real, each column's
// largest-magnitude component positive.
struct SpectralSlice {
    double u = 0;
    Eigen::VectorXd lambdas;
    double gap = 0;       // lambdas[1]
    double gamma_me = 0;  // <0|(B-C)|1>
    double kappa0 = 0;    // <0|(B-C)|0>
    double kappa1 = 0;    // <1|(B-C)|1>
    Eigen::MatrixXd vecs;
};

SpectralSlice spectral_slice(const OperatorPair& pair, double u);

// Slices along a sorted grid with the eigenvector sign chosen by maximal
// overlap with the previous slice, so gamma_me and kappa are continuous
// functions of u.
std::vector<SpectralSlice> spectral_profile(const OperatorPair& pair,
                                            const std::vector<double>& u_grid);

// Full-space eigenvalues at u (diagnostic; the slice quantities above are
// sector-restricted).
Eigen::VectorXd full_spectrum(const OperatorPair& pair, double u);

// State-space helpers.
Eigen::VectorXcd uniform_plus_state(const OperatorPair& pair);   // full space
Eigen::VectorXcd sector_plus_state(const OperatorPair& pair);    // sector coords
Eigen::VectorXcd to_sector(const OperatorPair& pair, const Eigen::VectorXcd& full);
Eigen::VectorXcd to_full(const OperatorPair& pair, const Eigen::VectorXcd& sector);

}  // namespace aqopt

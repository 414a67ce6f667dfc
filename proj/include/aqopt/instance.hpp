#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>

namespace aqopt {

// All-to-all Ising cost Hamiltonian: n spins, symmetric coupling matrix with
// zero diagonal. Cost of a configuration z in {-1,+1}^n is
// sum_{i<j} J(i,j) z_i z_j. Immutable in practice: construct, validate, share.
struct ProblemInstance {
    int n = 0;
    Eigen::MatrixXd coupling;  // n x n, symmetric, zero diagonal

    // Throws ValidationError on asymmetry, nonzero diagonal, non-finite
    // entries or n < 1.
    void validate() const;

    double classical_cost(uint64_t bits) const;  // z_i = +1 when bit i is 0
};

// The fixed 8-qubit benchmark instance, couplings embedded at the published
// three-decimal precision.
ProblemInstance benchmark8_instance();

// Couplings i.i.d. uniform on [-1, 1] from xoshiro256** seeded via
// splitmix64. Stream order: upper triangle row-major, then mirrored.
// Identical (n, seed) gives identical matrices on any platform.
ProblemInstance random_instance(int n, uint64_t seed);

// JSON document {"n": int, "J": [[...], ...]} with the full matrix stored.
ProblemInstance load_instance(const std::string& path);
void save_instance(const ProblemInstance& instance, const std::string& path);

std::string instance_to_json(const ProblemInstance& instance);
ProblemInstance instance_from_json(const std::string& text);

// Short content digest used by run manifests.
uint64_t instance_digest(const ProblemInstance& instance);

}  // namespace aqopt

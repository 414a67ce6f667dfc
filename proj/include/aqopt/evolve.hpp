#pragma once

#include <Eigen/Dense>
#include <memory>
#include <mutex>
#include <unordered_map>

#include "aqopt/operators.hpp"
#include "aqopt/schedule.hpp"

namespace aqopt {

enum class Space { Full, Sector };

// Eigendecomposition of H(u) for one control value: H = V diag(evals) V^T.
// coupling_eigen holds V^T (B-C) V once a gradient pass has requested it.
struct StepDecomp {
    Eigen::VectorXd evals;
    Eigen::MatrixXd evecs;
    Eigen::MatrixXd coupling_eigen;
    bool has_coupling = false;
};

// Decomposition cache keyed by u quantized to `u_quantum` (the Hamiltonian
// is built at the quantized value, so cached evolution is exact for the
// quantized schedule). The default quantum 1e-9 is far below any physical
// resolution used here; optimizer objective loops may share a coarser cache
// to bound the number of factorizations. Thread-safe for concurrent
// get(); entries are never evicted.
class StepCache {
  public:
    StepCache(const OperatorPair& pair, Space space, double u_quantum = 1e-9);

    const StepDecomp& get(double u);
    // As get(), with V^T (B-C) V materialized for gradient passes.
    const StepDecomp& get_with_coupling(double u);
    double quantize(double u) const;
    Space space() const { return space_; }
    std::size_t size() const;

  private:
    const OperatorPair& pair_;
    Space space_;
    double quantum_;
    mutable std::mutex mutex_;
    std::unordered_map<long long, std::unique_ptr<StepDecomp>> entries_;
};

// psi <- exp(-i H dt) psi using the decomposition.
void apply_step(const StepDecomp& decomp, double dt, Eigen::VectorXcd& psi);

struct EvolveOptions {
    double dt_max = 0;               // <= 0: schedule duration / 2000
    bool record_trace = true;        // per-step observables
    bool track_populations = true;   // instantaneous eigen-populations + phase
    StepCache* cache = nullptr;      // optional shared cache
    double u_quantum = 1e-9;         // used when no shared cache is given
};

struct EvolutionTrace {
    std::vector<double> times;
    std::vector<double> u;
    std::vector<double> energy;      // <psi|C|psi>
    std::vector<double> norm;
    std::vector<double> pop0, pop1;  // populations of the two lowest H(u) states
    // Instantaneous-frame data in a gauge continued along the trajectory
    // (eigenvector signs matched step to step). phase_diff = arg(c0)-arg(c1)
    // principal value; gamma_me = <0|(B-C)|1> in the same gauge (sector
    // evolutions only); gap = lambda1 - lambda0.
    std::vector<double> phase_diff;
    std::vector<double> gamma_me;
    std::vector<double> gap;
    Eigen::VectorXcd final_state;
    double final_energy = 0;
    double max_norm_drift = 0;
    int clamp_count = 0;             // composite schedules only
};

// Exact piecewise-constant evolution of `initial` (full space when its size
// is 2^n, sector when 2^(n-1)). Bang sequences keep their exact segment
// durations; composite schedules are midpoint-sampled at dt_max resolution
// first. dt_max controls only sampling/trace density: within a constant-u
// span the step propagator is exact at any width.
EvolutionTrace evolve(const OperatorPair& pair, const Schedule& schedule,
                      const Eigen::VectorXcd& initial, const EvolveOptions& opts = {});

// QAOA circuit prod_i e^{-i beta_i B} e^{-i gamma_i C} (the layer-1 C bang
// acts first) on a full-space state; exact bang propagators.
struct QaoaAngles {
    std::vector<double> gammas;  // C-bang durations
    std::vector<double> betas;   // B-bang durations

    int p() const { return static_cast<int>(gammas.size()); }
    double total_time() const;
    void validate() const;
    BangSequence to_bang_sequence() const;
};

Eigen::VectorXcd apply_qaoa(const OperatorPair& pair, const QaoaAngles& angles,
                            const Eigen::VectorXcd& initial);

// <psi|C|psi> in either space.
double energy_expectation(const OperatorPair& pair, const Eigen::VectorXcd& state);

}  // namespace aqopt

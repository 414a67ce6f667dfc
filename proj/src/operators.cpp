#include "aqopt/operators.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "aqopt/errors.hpp"

namespace aqopt {

namespace {

// Largest-magnitude component positive; ties resolved by the lowest index
// (components are generically nonzero, ties do not arise in practice).
void fix_column_gauge(Eigen::MatrixXd& vecs) {
    for (long j = 0; j < vecs.cols(); ++j) {
        long imax = 0;
        vecs.col(j).cwiseAbs().maxCoeff(&imax);
        if (vecs(imax, j) < 0) vecs.col(j) = -vecs.col(j);
    }
}

}  // namespace

Eigen::MatrixXd OperatorPair::hamiltonian_full(double u) const {
    Eigen::MatrixXd h = u * b_full;
    h.diagonal() += (1.0 - u) * c_diag;
    return h;
}

Eigen::MatrixXd OperatorPair::hamiltonian_sector(double u) const {
    Eigen::MatrixXd h = u * b_sector;
    h.diagonal() += (1.0 - u) * c_sector;
    return h;
}

Eigen::MatrixXd OperatorPair::sector_basis() const {
    Eigen::MatrixXd basis = Eigen::MatrixXd::Zero(dim, sector_dim);
    const uint64_t mask = (dim - 1);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (long p = 0; p < sector_dim; ++p) {
        const uint64_t z = reps[p];
        basis(static_cast<long>(z), p) = inv_sqrt2;
        basis(static_cast<long>(~z & mask), p) = inv_sqrt2;
    }
    return basis;
}

OperatorPair build_operators(const ProblemInstance& instance, long max_dim) {
    instance.validate();
    if (instance.n >= 63 || (1L << instance.n) > max_dim)
        throw ResourceError("build_operators: 2^" + std::to_string(instance.n) +
                            " exceeds the dense-operator budget of " + std::to_string(max_dim));

    OperatorPair pair;
    pair.n = instance.n;
    pair.dim = 1L << instance.n;
    const long dim = pair.dim;
    const uint64_t mask = dim - 1;

    pair.c_diag.resize(dim);
    for (long z = 0; z < dim; ++z) pair.c_diag(z) = instance.classical_cost(z);

    // B = -sum_i X_i : every single-bit flip connects with weight -1.
    pair.b_full = Eigen::MatrixXd::Zero(dim, dim);
    for (long z = 0; z < dim; ++z)
        for (int q = 0; q < pair.n; ++q) pair.b_full(z ^ (1L << q), z) = -1.0;

    // Pair basis of the +1 flip sector: representative is the smaller of
    // {z, ~z}. The zero-diagonal Ising cost is flip invariant, so C stays
    // diagonal in this basis.
    pair.sector_dim = dim / 2;
    pair.reps.reserve(pair.sector_dim);
    pair.sector_index.assign(dim, -1);
    for (long z = 0; z < dim; ++z) {
        const uint64_t zb = ~static_cast<uint64_t>(z) & mask;
        if (static_cast<uint64_t>(z) < zb) {
            pair.sector_index[z] = static_cast<long>(pair.reps.size());
            pair.sector_index[zb] = pair.sector_index[z];
            pair.reps.push_back(z);
        }
    }

    pair.c_sector.resize(pair.sector_dim);
    for (long p = 0; p < pair.sector_dim; ++p) {
        const uint64_t z = pair.reps[p];
        const double cz = pair.c_diag(static_cast<long>(z));
        const double czb = pair.c_diag(static_cast<long>(~z & mask));
        if (std::abs(cz - czb) > 1e-12)
            throw std::logic_error("build_operators: cost not flip invariant");
        pair.c_sector(p) = cz;
    }

    // <p'|B|p> = -(number of single-bit flips from z_p into {z_p', ~z_p'}).
    pair.b_sector = Eigen::MatrixXd::Zero(pair.sector_dim, pair.sector_dim);
    for (long p = 0; p < pair.sector_dim; ++p) {
        const uint64_t z = pair.reps[p];
        for (int q = 0; q < pair.n; ++q) {
            const long target = pair.sector_index[z ^ (1ULL << q)];
            pair.b_sector(target, p) -= 1.0;
        }
    }

    // Commutation with the global flip holds by construction; assert it on
    // the assembled matrices as an internal consistency check.
    double max_comm = 0.0;
    for (long z = 0; z < dim; ++z) {
        const long zf = static_cast<long>(~static_cast<uint64_t>(z) & mask);
        for (long w = 0; w < dim; ++w) {
            const long wf = static_cast<long>(~static_cast<uint64_t>(w) & mask);
            max_comm = std::max(max_comm, std::abs(pair.b_full(zf, wf) - pair.b_full(z, w)));
        }
        max_comm = std::max(max_comm, std::abs(pair.c_diag(z) - pair.c_diag(zf)));
    }
    if (max_comm > 1e-12)
        throw std::logic_error("build_operators: operators do not commute with the global flip");

    pair.bc_sector = pair.b_sector;
    pair.bc_sector.diagonal() -= pair.c_sector;
    return pair;
}

double ground_energy(const ProblemInstance& instance) {
    instance.validate();
    const long dim = 1L << instance.n;
    double best = instance.classical_cost(0);
    for (long z = 1; z < dim; ++z) best = std::min(best, instance.classical_cost(z));
    return best;
}

SpectralSlice spectral_slice(const OperatorPair& pair, double u) {
    if (u < 0.0 || u > 1.0) throw ValidationError("spectral_slice: u outside [0,1]");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(pair.hamiltonian_sector(u));

    SpectralSlice slice;
    slice.u = u;
    slice.lambdas = es.eigenvalues();
    slice.vecs = es.eigenvectors();
    slice.lambdas.array() -= slice.lambdas(0);
    slice.gap = slice.lambdas(1);
    if (slice.gap < 1e-12)
        throw DegeneracyError("spectral_slice: ground gap below 1e-12 at u=" + std::to_string(u));

    fix_column_gauge(slice.vecs);
    slice.gamma_me = slice.vecs.col(0).dot(pair.bc_sector * slice.vecs.col(1));
    slice.kappa0 = slice.vecs.col(0).dot(pair.bc_sector * slice.vecs.col(0));
    slice.kappa1 = slice.vecs.col(1).dot(pair.bc_sector * slice.vecs.col(1));
    return slice;
}

std::vector<SpectralSlice> spectral_profile(const OperatorPair& pair,
                                            const std::vector<double>& u_grid) {
    std::vector<SpectralSlice> out;
    out.reserve(u_grid.size());
    for (double u : u_grid) {
        SpectralSlice slice;
        try {
            slice = spectral_slice(pair, u);
        } catch (const DegeneracyError&) {
            throw DegeneracyError("spectral_profile: gap collapse at u=" + std::to_string(u));
        }
        if (!out.empty()) {
            const SpectralSlice& prev = out.back();
            for (long j = 0; j < slice.vecs.cols(); ++j)
                if (prev.vecs.col(j).dot(slice.vecs.col(j)) < 0.0) slice.vecs.col(j) *= -1.0;
            slice.gamma_me = slice.vecs.col(0).dot(pair.bc_sector * slice.vecs.col(1));
            slice.kappa0 = slice.vecs.col(0).dot(pair.bc_sector * slice.vecs.col(0));
            slice.kappa1 = slice.vecs.col(1).dot(pair.bc_sector * slice.vecs.col(1));
        }
        out.push_back(std::move(slice));
    }
    return out;
}

Eigen::VectorXd full_spectrum(const OperatorPair& pair, double u) {
    if (u < 0.0 || u > 1.0) throw ValidationError("full_spectrum: u outside [0,1]");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(pair.hamiltonian_full(u),
                                                      Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

Eigen::VectorXcd uniform_plus_state(const OperatorPair& pair) {
    const double amp = 1.0 / std::sqrt(static_cast<double>(pair.dim));
    return Eigen::VectorXcd::Constant(pair.dim, std::complex<double>(amp, 0.0));
}

Eigen::VectorXcd sector_plus_state(const OperatorPair& pair) {
    const double amp = 1.0 / std::sqrt(static_cast<double>(pair.sector_dim));
    return Eigen::VectorXcd::Constant(pair.sector_dim, std::complex<double>(amp, 0.0));
}

Eigen::VectorXcd to_sector(const OperatorPair& pair, const Eigen::VectorXcd& full) {
    if (full.size() != pair.dim) throw ValidationError("to_sector: wrong dimension");
    const uint64_t mask = pair.dim - 1;
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    Eigen::VectorXcd out(pair.sector_dim);
    for (long p = 0; p < pair.sector_dim; ++p) {
        const uint64_t z = pair.reps[p];
        out(p) = inv_sqrt2 * (full(static_cast<long>(z)) + full(static_cast<long>(~z & mask)));
    }
    return out;
}

Eigen::VectorXcd to_full(const OperatorPair& pair, const Eigen::VectorXcd& sector) {
    if (sector.size() != pair.sector_dim) throw ValidationError("to_full: wrong dimension");
    const uint64_t mask = pair.dim - 1;
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(pair.dim);
    for (long p = 0; p < pair.sector_dim; ++p) {
        const uint64_t z = pair.reps[p];
        out(static_cast<long>(z)) = inv_sqrt2 * sector(p);
        out(static_cast<long>(~z & mask)) = inv_sqrt2 * sector(p);
    }
    return out;
}

}  // namespace aqopt

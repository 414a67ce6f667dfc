#include "aqopt/xcheck.hpp"

#include <cmath>
#include <complex>

#include "aqopt/errors.hpp"
#include "aqopt/trotter.hpp"

namespace aqopt {
namespace xcheck {

namespace {

using Cplx = std::complex<double>;

double one_norm(const Eigen::MatrixXcd& a) {
    double best = 0;
    for (long j = 0; j < a.cols(); ++j) best = std::max(best, a.col(j).cwiseAbs().sum());
    return best;
}

// (u, duration) spans with exact bang segment lengths, built independently
// of the evolve() implementation.
std::vector<std::pair<double, double>> flatten(const Schedule& schedule, int n_substeps) {
    std::vector<std::pair<double, double>> spans;
    if (const auto* pc = std::get_if<PiecewiseConstant>(&schedule)) {
        const double dt = pc->t_f / static_cast<double>(pc->values.size());
        for (double u : pc->values) spans.emplace_back(u, dt);
    } else if (const auto* bang = std::get_if<BangSequence>(&schedule)) {
        for (const auto& seg : bang->segments)
            if (seg.duration > 0) spans.emplace_back(static_cast<double>(seg.level), seg.duration);
    } else {
        const auto& comp = std::get<BabComposite>(schedule);
        const int n = std::max(1, n_substeps);
        const double dt = comp.t_f / n;
        for (int k = 0; k < n; ++k) {
            double u = comp.value((k + 0.5) * dt);
            spans.emplace_back(std::clamp(u, 0.0, 1.0), dt);
        }
    }
    return spans;
}

Eigen::MatrixXcd step_unitary(const OperatorPair& pair, double u, double duration) {
    Eigen::MatrixXcd h = Cplx(0, -duration) *
                         (u * pair.b_full +
                          Eigen::MatrixXd((1.0 - u) * pair.c_diag.asDiagonal()))
                             .cast<Cplx>();
    return oracle_expm(h);
}

}  // namespace

Eigen::MatrixXcd oracle_expm(const Eigen::MatrixXcd& a) {
    const long dim = a.rows();
    int squarings = 0;
    double norm = one_norm(a);
    while (norm > 0.5) {
        norm *= 0.5;
        ++squarings;
    }
    const double scale = std::ldexp(1.0, -squarings);

    // ||B|| <= 1/2, so 30 terms leave a truncation residual below
    // (1/2)^31/31! -- vastly beyond double precision.
    const Eigen::MatrixXcd b = scale * a;
    Eigen::MatrixXcd result = Eigen::MatrixXcd::Identity(dim, dim);
    Eigen::MatrixXcd term = Eigen::MatrixXcd::Identity(dim, dim);
    for (int k = 1; k <= 30; ++k) {
        term = (term * b) / static_cast<double>(k);
        result += term;
    }
    for (int s = 0; s < squarings; ++s) result = result * result;
    return result;
}

Eigen::VectorXcd oracle_expm_evolve(const OperatorPair& pair, const Schedule& schedule,
                                    int n_substeps, const Eigen::VectorXcd& initial) {
    if (pair.n > 6) throw ResourceError("oracle_expm_evolve: limited to n <= 6");
    if (initial.size() != pair.dim)
        throw ValidationError("oracle_expm_evolve: expects a full-space state");
    Eigen::VectorXcd psi = initial;
    for (const auto& [u, duration] : flatten(schedule, n_substeps))
        psi = step_unitary(pair, u, duration) * psi;
    return psi;
}

double oracle_ground_energy(const ProblemInstance& instance) {
    if (instance.n > 24) throw ResourceError("oracle_ground_energy: limited to n <= 24");
    const long dim = 1L << instance.n;
    double best = 0;
    for (long bits = 0; bits < dim; ++bits) {
        // independent cost evaluation (not ProblemInstance::classical_cost)
        double cost = 0;
        for (int i = 0; i < instance.n; ++i)
            for (int j = i + 1; j < instance.n; ++j) {
                const double zi = (bits >> i) & 1 ? -1.0 : 1.0;
                const double zj = (bits >> j) & 1 ? -1.0 : 1.0;
                cost += instance.coupling(i, j) * zi * zj;
            }
        if (bits == 0 || cost < best) best = cost;
    }
    return best;
}

double oracle_spectral_norm(const Eigen::MatrixXcd& m) {
    const Eigen::MatrixXcd gram = m.adjoint() * m;
    Eigen::VectorXcd v = Eigen::VectorXcd::Ones(m.cols()).normalized();
    double value = 0;
    for (int it = 0; it < 10000; ++it) {
        Eigen::VectorXcd w = gram * v;
        const double next = w.norm();
        if (next == 0) return 0;
        w /= next;
        if (std::abs(next - value) <= 1e-13 * std::max(1.0, next) && it > 4) {
            value = next;
            break;
        }
        value = next;
        v = w;
    }
    return std::sqrt(value);
}

double oracle_unitary_error(const OperatorPair& pair, const Schedule& schedule, int p) {
    if (pair.n > 4) throw ResourceError("oracle_unitary_error: limited to n <= 4");

    // Dense time-ordered evolution. Constant-u spans are exact at any
    // width; smooth composites get a fine midpoint sampling.
    Eigen::MatrixXcd u_exact = Eigen::MatrixXcd::Identity(pair.dim, pair.dim);
    for (const auto& [u, duration] : flatten(schedule, 4096))
        u_exact = step_unitary(pair, u, duration) * u_exact;

    const QaoaAngles angles = trotterize_schedule(schedule, p);
    Eigen::MatrixXcd u_pf = Eigen::MatrixXcd::Identity(pair.dim, pair.dim);
    for (int k = 0; k < angles.p(); ++k) {
        if (angles.gammas[k] > 0) u_pf = step_unitary(pair, 0.0, angles.gammas[k]) * u_pf;
        if (angles.betas[k] > 0) u_pf = step_unitary(pair, 1.0, angles.betas[k]) * u_pf;
    }
    return oracle_spectral_norm(u_exact - u_pf);
}

}  // namespace xcheck
}  // namespace aqopt

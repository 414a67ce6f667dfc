#include "aqopt/evolve.hpp"

#include <cmath>
#include <complex>
#include <string>

#include "aqopt/errors.hpp"

namespace aqopt {

namespace {

constexpr double kNormTolerance = 1e-8;

Space space_of(const OperatorPair& pair, const Eigen::VectorXcd& state) {
    if (state.size() == pair.dim) return Space::Full;
    if (state.size() == pair.sector_dim) return Space::Sector;
    throw ValidationError("state dimension matches neither the full space nor the sector");
}

double wrap_phase(double phi) {
    while (phi > M_PI) phi -= 2.0 * M_PI;
    while (phi <= -M_PI) phi += 2.0 * M_PI;
    return phi;
}

}  // namespace

StepCache::StepCache(const OperatorPair& pair, Space space, double u_quantum)
    : pair_(pair), space_(space), quantum_(u_quantum > 0 ? u_quantum : 1e-9) {}

double StepCache::quantize(double u) const {
    return static_cast<double>(std::llround(u / quantum_)) * quantum_;
}

std::size_t StepCache::size() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return entries_.size();
}

const StepDecomp& StepCache::get(double u) {
    const long long key = std::llround(u / quantum_);
    {
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = entries_.find(key);
        if (it != entries_.end()) return *it->second;
    }
    const double uq = static_cast<double>(key) * quantum_;
    auto decomp = std::make_unique<StepDecomp>();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
        space_ == Space::Sector ? pair_.hamiltonian_sector(uq) : pair_.hamiltonian_full(uq));
    decomp->evals = es.eigenvalues();
    decomp->evecs = es.eigenvectors();

    std::lock_guard<std::mutex> lock(mutex_);
    auto [it, inserted] = entries_.try_emplace(key, std::move(decomp));
    return *it->second;
}

const StepDecomp& StepCache::get_with_coupling(double u) {
    const StepDecomp& base = get(u);
    {
        std::lock_guard<std::mutex> lock(mutex_);
        if (base.has_coupling) return base;
    }
    Eigen::MatrixXd coupling;
    if (space_ == Space::Sector) {
        coupling = pair_.bc_sector;
    } else {
        coupling = pair_.b_full;
        coupling.diagonal() -= pair_.c_diag;
    }
    Eigen::MatrixXd projected = base.evecs.transpose() * (coupling * base.evecs);

    std::lock_guard<std::mutex> lock(mutex_);
    StepDecomp& entry = const_cast<StepDecomp&>(base);
    if (!entry.has_coupling) {
        entry.coupling_eigen = std::move(projected);
        entry.has_coupling = true;
    }
    return entry;
}

void apply_step(const StepDecomp& decomp, double dt, Eigen::VectorXcd& psi) {
    const Eigen::MatrixXd& v = decomp.evecs;
    const long dim = v.rows();
    Eigen::VectorXd re = psi.real();
    Eigen::VectorXd im = psi.imag();
    Eigen::VectorXd tre = v.transpose() * re;
    Eigen::VectorXd tim = v.transpose() * im;
    for (long a = 0; a < dim; ++a) {
        const double angle = decomp.evals(a) * dt;
        const double c = std::cos(angle), s = std::sin(angle);
        const double nr = tre(a) * c + tim(a) * s;
        const double ni = tim(a) * c - tre(a) * s;
        tre(a) = nr;
        tim(a) = ni;
    }
    re.noalias() = v * tre;
    im.noalias() = v * tim;
    psi.real() = re;
    psi.imag() = im;
}

double QaoaAngles::total_time() const {
    double total = 0;
    for (double g : gammas) total += g;
    for (double b : betas) total += b;
    return total;
}

void QaoaAngles::validate() const {
    if (gammas.empty() || gammas.size() != betas.size())
        throw ValidationError("qaoa angles: gamma/beta lists must be nonempty and equal length");
    for (double g : gammas)
        if (!(g >= 0)) throw ValidationError("qaoa angles: negative gamma");
    for (double b : betas)
        if (!(b >= 0)) throw ValidationError("qaoa angles: negative beta");
}

BangSequence QaoaAngles::to_bang_sequence() const {
    validate();
    BangSequence seq;
    for (int i = 0; i < p(); ++i) {
        if (gammas[i] > 0) seq.segments.push_back({0, gammas[i]});
        if (betas[i] > 0) seq.segments.push_back({1, betas[i]});
    }
    if (seq.segments.empty()) seq.segments.push_back({0, 0.0});
    return seq;
}

double energy_expectation(const OperatorPair& pair, const Eigen::VectorXcd& state) {
    const Eigen::VectorXd& diag =
        space_of(pair, state) == Space::Full ? pair.c_diag : pair.c_sector;
    double e = 0;
    for (long i = 0; i < state.size(); ++i) e += diag(i) * std::norm(state(i));
    return e;
}

Eigen::VectorXcd apply_qaoa(const OperatorPair& pair, const QaoaAngles& angles,
                            const Eigen::VectorXcd& initial) {
    angles.validate();
    if (initial.size() != pair.dim)
        throw ValidationError("apply_qaoa: expects a full-space state");

    Eigen::VectorXcd psi = initial;
    const std::complex<double> im_unit(0.0, 1.0);
    for (int layer = 0; layer < angles.p(); ++layer) {
        const double gamma = angles.gammas[layer];
        if (gamma > 0)
            for (long z = 0; z < pair.dim; ++z)
                psi(z) *= std::polar(1.0, -pair.c_diag(z) * gamma);

        const double beta = angles.betas[layer];
        if (beta > 0) {
            // e^{-i beta B} = prod_q e^{+i beta X_q}
            const double c = std::cos(beta);
            const std::complex<double> is = im_unit * std::sin(beta);
            for (int q = 0; q < pair.n; ++q) {
                const long bit = 1L << q;
                for (long z = 0; z < pair.dim; ++z) {
                    if (z & bit) continue;
                    const std::complex<double> a0 = psi(z);
                    const std::complex<double> a1 = psi(z | bit);
                    psi(z) = c * a0 + is * a1;
                    psi(z | bit) = is * a0 + c * a1;
                }
            }
        }
    }
    return psi;
}

EvolutionTrace evolve(const OperatorPair& pair, const Schedule& schedule,
                      const Eigen::VectorXcd& initial, const EvolveOptions& opts) {
    validate_schedule(schedule);
    const Space space = space_of(pair, initial);
    if (std::abs(initial.norm() - 1.0) > kNormTolerance)
        throw ValidationError("evolve: initial state is not normalized");

    const double t_f = schedule_duration(schedule);
    const double dt_max = opts.dt_max > 0 ? opts.dt_max : t_f / 2000.0;

    // Flatten every variant into (u, duration) spans with exact durations.
    struct Span {
        double u, duration;
    };
    std::vector<Span> spans;
    int clamp_count = 0;
    if (const auto* pc = std::get_if<PiecewiseConstant>(&schedule)) {
        const double dt = pc->dt();
        spans.reserve(pc->values.size());
        for (double u : pc->values) spans.push_back({u, dt});
    } else if (const auto* bang = std::get_if<BangSequence>(&schedule)) {
        for (const auto& seg : bang->segments)
            if (seg.duration > 0) spans.push_back({static_cast<double>(seg.level), seg.duration});
    } else {
        const auto sampled = sample_schedule(schedule, static_cast<int>(std::ceil(t_f / dt_max)));
        clamp_count = sampled.clamp_count;
        const double dt = sampled.pc.dt();
        spans.reserve(sampled.pc.values.size());
        for (double u : sampled.pc.values) spans.push_back({u, dt});
    }

    StepCache local_cache(pair, space, opts.u_quantum);
    StepCache& cache = opts.cache ? *opts.cache : local_cache;
    if (opts.cache && opts.cache->space() != space)
        throw ValidationError("evolve: shared cache built for the other space");

    EvolutionTrace trace;
    trace.clamp_count = clamp_count;
    Eigen::VectorXcd psi = initial;

    // Eigenvector signs are fixed per decomposition, not along the path;
    // carry sign parities so the recorded frame is continuous in time.
    double sign0 = 1.0, sign1 = 1.0;
    Eigen::VectorXd prev_v0, prev_v1;
    auto record = [&](double t, double u, const StepDecomp* decomp) {
        trace.times.push_back(t);
        trace.u.push_back(u);
        trace.energy.push_back(energy_expectation(pair, psi));
        const double nrm = psi.norm();
        trace.norm.push_back(nrm);
        trace.max_norm_drift = std::max(trace.max_norm_drift, std::abs(nrm - 1.0));
        if (decomp && opts.track_populations) {
            const auto& v0 = decomp->evecs.col(0);
            const auto& v1 = decomp->evecs.col(1);
            if (prev_v0.size() > 0) {
                if (v0.dot(prev_v0) < 0) sign0 = -sign0;
                if (v1.dot(prev_v1) < 0) sign1 = -sign1;
            }
            prev_v0 = v0;
            prev_v1 = v1;
            const auto a0 = sign0 * std::complex<double>(v0.dot(psi.real()), v0.dot(psi.imag()));
            const auto a1 = sign1 * std::complex<double>(v1.dot(psi.real()), v1.dot(psi.imag()));
            trace.pop0.push_back(std::norm(a0));
            trace.pop1.push_back(std::norm(a1));
            trace.phase_diff.push_back(wrap_phase(std::arg(a0) - std::arg(a1)));
            trace.gap.push_back(decomp->evals(1) - decomp->evals(0));
            if (space == Space::Sector)
                trace.gamma_me.push_back(sign0 * sign1 * v0.dot(pair.bc_sector * v1));
        }
    };

    double t = 0;
    if (opts.record_trace && !spans.empty())
        record(0.0, spans.front().u, &cache.get(spans.front().u));

    for (const auto& span : spans) {
        if (!(span.u >= 0.0 && span.u <= 1.0))
            throw ValidationError("evolve: control value outside [0,1]");
        const StepDecomp& decomp = cache.get(span.u);
        if (!opts.record_trace) {
            apply_step(decomp, span.duration, psi);
            t += span.duration;
            continue;
        }
        const int substeps = std::max(1, static_cast<int>(std::ceil(span.duration / dt_max)));
        const double dt = span.duration / substeps;
        for (int s = 0; s < substeps; ++s) {
            apply_step(decomp, dt, psi);
            t += dt;
            record(t, span.u, &decomp);
        }
    }

    trace.final_state = std::move(psi);
    trace.final_energy = energy_expectation(pair, trace.final_state);
    if (!opts.record_trace) {
        trace.max_norm_drift = std::abs(trace.final_state.norm() - 1.0);
    }
    return trace;
}

}  // namespace aqopt

#include "aqopt/optimal_control.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "aqopt/errors.hpp"

namespace aqopt {

namespace {

using Cplx = std::complex<double>;

double sinc(double x) { return std::abs(x) < 1e-8 ? 1.0 - x * x / 6.0 : std::sin(x) / x; }

double wrap_phase(double phi) {
    while (phi > std::numbers::pi) phi -= 2.0 * std::numbers::pi;
    while (phi <= -std::numbers::pi) phi += 2.0 * std::numbers::pi;
    return phi;
}

// Dominant discrete-spectrum component of (x - mean) over possibly
// non-uniform samples; returns angular frequency.
double dominant_frequency(const std::vector<double>& t, const std::vector<double>& x) {
    const std::size_t n = t.size();
    const double span = t.back() - t.front();
    double mean = 0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(n);

    double best_power = -1.0, best_omega = 0.0;
    const int m_max = static_cast<int>(n) / 2;
    for (int m = 1; m <= m_max; ++m) {
        const double omega = 2.0 * std::numbers::pi * m / span;
        Cplx acc(0, 0);
        for (std::size_t i = 0; i < n; ++i)
            acc += (x[i] - mean) * std::polar(1.0, -omega * t[i]);
        const double power = std::norm(acc);
        if (power > best_power) {
            best_power = power;
            best_omega = omega;
        }
    }
    return best_omega;
}

Cplx fourier_component(const std::vector<double>& t, const std::vector<double>& x, double omega) {
    double mean = 0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(x.size());
    Cplx acc(0, 0);
    for (std::size_t i = 0; i < t.size(); ++i)
        acc += (x[i] - mean) * std::polar(1.0, -omega * t[i]);
    return acc;
}

}  // namespace

GradientVector control_gradient(const OperatorPair& pair, const PiecewiseConstant& schedule,
                                const Eigen::VectorXcd& initial, StepCache* cache) {
    schedule.validate();
    const bool sector = initial.size() == pair.sector_dim;
    if (!sector && initial.size() != pair.dim)
        throw ValidationError("control_gradient: state dimension mismatch");

    const long n_steps = static_cast<long>(schedule.values.size());
    const double dt = schedule.dt();
    StepCache local(pair, sector ? Space::Sector : Space::Full, 1e-9);
    StepCache& steps = cache ? *cache : local;

    // Forward pass, storing the state entering each step.
    std::vector<Eigen::VectorXcd> states(n_steps + 1);
    states[0] = initial;
    for (long k = 0; k < n_steps; ++k) {
        states[k + 1] = states[k];
        apply_step(steps.get(schedule.values[k]), dt, states[k + 1]);
    }

    // Adjoint seed C|psi(t_f)> evolved backwards.
    const Eigen::VectorXd& c_diag = sector ? pair.c_sector : pair.c_diag;
    Eigen::VectorXcd adjoint = states[n_steps];
    for (long i = 0; i < adjoint.size(); ++i) adjoint(i) *= c_diag(i);

    GradientVector grad;
    grad.t_f = schedule.t_f;
    grad.values.assign(n_steps, 0.0);

    const long dim = initial.size();
    for (long k = n_steps - 1; k >= 0; --k) {
        const StepDecomp& decomp = steps.get_with_coupling(schedule.values[k]);
        const Eigen::MatrixXd& v = decomp.evecs;
        const Eigen::MatrixXd& gt = decomp.coupling_eigen;

        // Eigenbasis coordinates of the bracketing states.
        Eigen::VectorXcd psi_e(dim), adj_e(dim);
        {
            Eigen::VectorXd re = states[k].real(), im = states[k].imag();
            Eigen::VectorXd tre = v.transpose() * re, tim = v.transpose() * im;
            for (long a = 0; a < dim; ++a) psi_e(a) = Cplx(tre(a), tim(a));
            re = adjoint.real();
            im = adjoint.imag();
            tre = v.transpose() * re;
            tim = v.transpose() * im;
            for (long a = 0; a < dim; ++a) adj_e(a) = Cplx(tre(a), tim(a));
        }

        // dU/du in the eigenbasis: (dU)_ab = L_ab (B-C)_ab with
        // L_ab = -i dt sinc((la-lb) dt/2) exp(-i (la+lb) dt/2),
        // uniformly stable across degenerate pairs.
        Cplx acc(0, 0);
        for (long a = 0; a < dim; ++a) {
            const double la = decomp.evals(a);
            const Cplx wa = std::conj(adj_e(a));
            for (long b = 0; b < dim; ++b) {
                const double lb = decomp.evals(b);
                const Cplx l = Cplx(0, -dt) * sinc(0.5 * (la - lb) * dt) *
                               std::polar(1.0, -0.5 * (la + lb) * dt);
                acc += wa * l * gt(a, b) * psi_e(b);
            }
        }
        grad.values[k] = 2.0 * acc.real();

        apply_step(decomp, -dt, adjoint);  // U_k^dagger
    }
    return grad;
}

DescendResult descend(const OperatorPair& pair, const PiecewiseConstant& schedule0,
                      const Eigen::VectorXcd& initial, const DescendConfig& config) {
    schedule0.validate();
    DescendResult result;
    result.schedule = schedule0;

    const bool sector = initial.size() == pair.sector_dim;
    const bool coarse = config.cache_quantum >= 1e-6;
    StepCache persistent(pair, sector ? Space::Sector : Space::Full, config.cache_quantum);

    EvolveOptions eopts;
    eopts.record_trace = false;
    eopts.track_populations = false;
    if (coarse) eopts.cache = &persistent;
    auto eval = [&](const PiecewiseConstant& sched) {
        return evolve(pair, sched, initial, eopts).final_energy;
    };

    result.energy = eval(result.schedule);
    result.history.push_back(result.energy);

    const std::size_t n = result.schedule.values.size();
    double step0 = config.init_step;

    for (int iter = 0; iter < config.max_iters; ++iter) {
        const GradientVector grad =
            control_gradient(pair, result.schedule, initial, coarse ? &persistent : nullptr);

        bool accepted = false;
        double alpha = step0;
        for (int bt = 0; bt < config.max_backtracks; ++bt, alpha *= config.shrink) {
            PiecewiseConstant trial = result.schedule;
            double directional = 0;  // <g, u - u_trial>, >= 0 on the projection arc
            for (std::size_t i = 0; i < n; ++i) {
                trial.values[i] =
                    std::clamp(result.schedule.values[i] - alpha * grad.values[i], 0.0, 1.0);
                directional += grad.values[i] * (result.schedule.values[i] - trial.values[i]);
            }
            if (directional <= 0) break;  // fully constrained or zero gradient
            const double trial_energy = eval(trial);
            if (trial_energy <= result.energy - config.armijo_c * directional) {
                const double gain = result.energy - trial_energy;
                result.schedule = std::move(trial);
                result.energy = trial_energy;
                result.history.push_back(trial_energy);
                accepted = true;
                step0 = std::min(alpha * 2.0, 1e6);
                if (gain < config.energy_tol) result.converged = true;
                break;
            }
        }
        ++result.iterations;
        if (!accepted) {
            result.converged = true;
            break;
        }
        if (result.converged) break;
    }
    return result;
}

BabDecomposition detect_bab(const PiecewiseConstant& schedule, double eps_bang) {
    schedule.validate();
    BabDecomposition out;
    const auto& u = schedule.values;
    const long n = static_cast<long>(u.size());
    const double dt = schedule.dt();

    long lead = 0;
    while (lead < n && u[lead] <= eps_bang) ++lead;
    long trail = 0;
    while (trail < n - lead && u[n - 1 - trail] >= 1.0 - eps_bang) ++trail;
    out.initial_bang = lead * dt;
    out.final_bang = trail * dt;
    out.interior_start = out.initial_bang;
    out.interior_end = schedule.t_f - out.final_bang;

    const long m = n - lead - trail;
    if (m < 8) return out;  // no interior to analyse

    std::vector<double> t_int(m), u_int(m);
    for (long i = 0; i < m; ++i) {
        t_int[i] = (lead + i + 0.5) * dt;
        u_int[i] = u[lead + i];
    }

    // Period guess from the dominant discrete-spectrum component.
    const double omega = dominant_frequency(t_int, u_int);
    if (!(omega > 0)) return out;
    const double period = 2.0 * std::numbers::pi / omega;
    long window = std::lround(period / dt);
    window = std::clamp(window, 3L, m / 3);
    if (window % 2 == 0) ++window;
    if (m < 3 * window) return out;

    // Centered moving average as the base curve; ends use shrinking windows.
    std::vector<double> base(m);
    for (long i = 0; i < m; ++i) {
        const long half = std::min({window / 2, i, m - 1 - i});
        double acc = 0;
        for (long j = i - half; j <= i + half; ++j) acc += u_int[j];
        base[i] = acc / static_cast<double>(2 * half + 1);
    }

    long crossings = 0;
    double prev = u_int[0] - base[0];
    for (long i = 1; i < m; ++i) {
        const double cur = u_int[i] - base[i];
        if (prev != 0.0 && cur != 0.0 && (prev < 0) != (cur < 0)) ++crossings;
        if (cur != 0.0) prev = cur;
    }
    out.oscillation_count = static_cast<int>(std::lround(static_cast<double>(crossings) / 2.0));
    const double interior_duration = out.interior_end - out.interior_start;
    out.mean_period =
        out.oscillation_count > 0 ? interior_duration / out.oscillation_count : 0.0;
    out.base_t = std::move(t_int);
    out.base_u = std::move(base);
    out.available = true;
    return out;
}

PhaseCheckReport oscillation_phase_check(const OperatorPair& pair,
                                         const PiecewiseConstant& schedule,
                                         const EvolutionTrace& trace) {
    PhaseCheckReport report;
    if (trace.pop0.empty() || trace.pop0.size() != trace.times.size() || trace.gamma_me.empty())
        throw ValidationError("oscillation_phase_check: trace lacks sector population data");

    const BabDecomposition bab = detect_bab(schedule);
    const double trim =
        bab.mean_period > 0 ? bab.mean_period
                            : 0.05 * (bab.interior_end - bab.interior_start);
    const double t_lo = bab.interior_start + trim, t_hi = bab.interior_end - trim;

    std::vector<double> t, u, cphi, integrand;
    report.min_two_level_pop = 1.0;
    for (std::size_t i = 0; i < trace.times.size(); ++i) {
        if (trace.times[i] < t_lo || trace.times[i] > t_hi) continue;
        const double pop = trace.pop0[i] + trace.pop1[i];
        report.min_two_level_pop = std::min(report.min_two_level_pop, pop);
        if (pop < 0.5) continue;
        t.push_back(trace.times[i]);
        u.push_back(trace.u[i]);
        // sgn(gamma) cos(varphi) is invariant under the eigenvector sign
        // freedom; this is cos(varphi) in the gamma > 0 convention.
        const double sign = trace.gamma_me[i] >= 0 ? 1.0 : -1.0;
        cphi.push_back(sign * std::cos(trace.phase_diff[i]));
        integrand.push_back(trace.gamma_me[i] / trace.gap[i] * std::cos(trace.phase_diff[i]));
    }
    if (t.size() < 32) return report;
    report.two_level_ok = report.min_two_level_pop > 0.95;

    std::vector<double> udot(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (i == 0)
            udot[i] = (u[1] - u[0]) / (t[1] - t[0]);
        else if (i + 1 == t.size())
            udot[i] = (u[i] - u[i - 1]) / (t[i] - t[i - 1]);
        else
            udot[i] = (u[i + 1] - u[i - 1]) / (t[i + 1] - t[i - 1]);
    }

    for (std::size_t i = 0; i + 1 < t.size(); ++i) {
        const double h = t[i + 1] - t[i];
        const double f0 = integrand[i] * udot[i];
        const double f1 = integrand[i + 1] * udot[i + 1];
        report.theta += 0.5 * h * (f0 + f1);
        report.integrand_l1 += 0.5 * h * (std::abs(f0) + std::abs(f1));
    }

    const double omega = dominant_frequency(t, u);
    if (!(omega > 0)) return report;
    const Cplx xu = fourier_component(t, u, omega);
    const Cplx xud = fourier_component(t, udot, omega);
    const Cplx xc = fourier_component(t, cphi, omega);
    report.lag_u = std::abs(wrap_phase(std::arg(xu) - std::arg(xc)));
    report.lag_udot = std::abs(wrap_phase(std::arg(xud) - std::arg(xc)));
    report.available = true;
    return report;
}

}  // namespace aqopt

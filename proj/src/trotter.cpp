#include "aqopt/trotter.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "aqopt/errors.hpp"

namespace aqopt {

namespace {

// Nodes/weights for Gauss-Legendre of fixed order 24 on [-1,1], generated
// once by Newton iteration on the Legendre polynomial.
struct GaussRule {
    std::vector<double> nodes, weights;

    explicit GaussRule(int order) {
        nodes.resize(order);
        weights.resize(order);
        for (int i = 0; i < order; ++i) {
            double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = x;
                for (int k = 2; k <= order; ++k) {
                    const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                const double dp = order * (x * p1 - p0) / (x * x - 1.0);
                const double dx = p1 / dp;
                x -= dx;
                if (std::abs(dx) < 1e-15) break;
            }
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= order; ++k) {
                const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            const double dp = order * (x * p1 - p0) / (x * x - 1.0);
            nodes[i] = x;
            weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
    }
};

const GaussRule& rule24() {
    static const GaussRule rule(24);
    return rule;
}

// Integrate f over [a,b] split into panels at the sorted interior points of
// `cuts` plus enough uniform panels to resolve `periods` oscillations.
template <typename F>
double gauss_panels(const F& f, double a, double b, const std::vector<double>& cuts,
                    double period) {
    std::vector<double> edges{a, b};
    for (double c : cuts)
        if (c > a + 1e-15 && c < b - 1e-15) edges.push_back(c);
    std::sort(edges.begin(), edges.end());

    const GaussRule& rule = rule24();
    double total = 0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        const double lo = edges[i], hi = edges[i + 1];
        // <= ~1.5 oscillation periods per panel keeps order-24 GL far below
        // 1e-12 relative error
        int panels = 1;
        if (period > 0) panels = std::max(1, static_cast<int>(std::ceil((hi - lo) / (1.5 * period))));
        const double h = (hi - lo) / panels;
        for (int q = 0; q < panels; ++q) {
            const double plo = lo + q * h;
            const double mid = plo + 0.5 * h, half = 0.5 * h;
            double acc = 0;
            for (std::size_t j = 0; j < rule.nodes.size(); ++j)
                acc += rule.weights[j] * f(mid + half * rule.nodes[j]);
            total += half * acc;
        }
    }
    return total;
}

std::vector<double> knot_times(const Curve& u0, double t_f) {
    std::vector<double> cuts;
    for (double s : u0.s) cuts.push_back(s * t_f);
    return cuts;
}

}  // namespace

double TrotterBoundConfig::control(double t) const {
    double u = u0.at(t / t_f);
    if (c0 != 0.0) u -= c0 * std::sin(2.0 * std::numbers::pi * t / tau + phi);
    return u;
}

void TrotterBoundConfig::validate() const {
    if (!(t_f > 0)) throw ValidationError("trotter: t_f must be positive");
    if (p < 1) throw ValidationError("trotter: p must be >= 1");
    if (c0 < 0 || c0 > 0.5) throw ValidationError("trotter: c0 must be in [0, 0.5]");
    if (c0 > 0 && !(tau > 0)) throw ValidationError("trotter: tau must be positive");
    u0.validate();
    if (commutator_norm < 0) throw ValidationError("trotter: negative commutator norm");

    // Range check on a grid resolving every oscillation plus the knots.
    const int samples = std::max(2000, c0 > 0 ? static_cast<int>(std::ceil(40.0 * t_f / tau)) : 0);
    for (int i = 0; i <= samples; ++i) {
        const double u = control(t_f * i / samples);
        if (u < -1e-9 || u > 1.0 + 1e-9)
            throw ValidationError("trotter: control leaves [0,1] (u=" + std::to_string(u) + ")");
    }
}

double commutator_norm(const OperatorPair& pair) {
    // M = BC - CB with diagonal C: M_zw = B_zw (c_w - c_z).
    const long dim = pair.dim;
    Eigen::MatrixXd m(dim, dim);
    for (long w = 0; w < dim; ++w)
        for (long z = 0; z < dim; ++z)
            m(z, w) = pair.b_full(z, w) * (pair.c_diag(w) - pair.c_diag(z));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.transpose() * m, Eigen::EigenvaluesOnly);
    return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

double bound_double_integral(const TrotterBoundConfig& config) {
    config.validate();
    const double dt = config.delta_t();
    const std::vector<double> cuts = knot_times(config.u0, config.t_f);
    const double period = config.c0 > 0 ? config.tau : 0.0;

    double total = 0;
    for (int k = 0; k < config.p; ++k) {
        const double a = k * dt;
        const double b = a + dt;
        auto outer = [&](double s) {
            const double inner =
                gauss_panels([&](double r) { return config.control(r); }, a, s, cuts, period);
            return (1.0 - config.control(s)) * inner;
        };
        total += gauss_panels(outer, a, b, cuts, period);
    }
    return config.commutator_norm * total;
}

double bound_closed_form(const TrotterBoundConfig& config) {
    const double dt = config.delta_t();
    if (std::abs(config.tau - dt) > 1e-12 * std::max(1.0, dt))
        throw ValidationError("bound_closed_form: requires tau == delta_t");
    TrotterBoundConfig base = config;
    base.c0 = 0.0;
    const double correction = config.commutator_norm * config.c0 * dt * dt * config.p *
                              std::cos(config.phi) / (2.0 * std::numbers::pi);
    return bound_double_integral(base) - correction;
}

double bound_closed_form_coarse(const TrotterBoundConfig& config) {
    const double dt = config.delta_t();
    if (std::abs(config.tau - dt) > 1e-12 * std::max(1.0, dt))
        throw ValidationError("bound_closed_form_coarse: requires tau == delta_t");
    return config.commutator_norm * 0.5 * dt * dt * config.p *
           (1.0 - config.c0 * std::cos(config.phi) / std::numbers::pi);
}

std::vector<TrotterScanRow> scan_p(double norm, double t_f, double tau, double c0, double phi,
                                   int p_min, int p_max, const Curve& u0) {
    if (p_min < 1 || p_max < p_min) throw ValidationError("scan_p: bad p range");
    std::vector<TrotterScanRow> rows;
    rows.reserve(p_max - p_min + 1);
    for (int p = p_min; p <= p_max; ++p) {
        TrotterBoundConfig cfg;
        cfg.t_f = t_f;
        cfg.p = p;
        cfg.tau = tau;
        cfg.c0 = c0;
        cfg.phi = phi;
        cfg.u0 = u0;
        cfg.commutator_norm = norm;
        TrotterScanRow row;
        row.p = p;
        row.delta_t = cfg.delta_t();
        row.bound_osc = bound_double_integral(cfg);
        cfg.c0 = 0.0;
        row.bound_no_osc = bound_double_integral(cfg);
        rows.push_back(row);
    }
    return rows;
}

std::vector<EpsilonScanRow> epsilon_scan(const TrotterBoundConfig& config,
                                         const std::vector<double>& eps_values) {
    std::vector<EpsilonScanRow> rows;
    rows.reserve(eps_values.size());
    for (double eps : eps_values) {
        TrotterBoundConfig cfg = config;
        if (!(config.tau + eps > 0)) throw ValidationError("epsilon_scan: eps leaves delta_t <= 0");
        cfg.t_f = config.p * (config.tau + eps);  // delta_t = tau + eps
        EpsilonScanRow row;
        row.eps = eps;
        row.bound = bound_double_integral(cfg);
        cfg.c0 = 0.0;
        row.bound_no_osc = bound_double_integral(cfg);
        rows.push_back(row);
    }
    return rows;
}

QaoaAngles trotterize_schedule(const Schedule& schedule, int p) {
    if (p < 1) throw ValidationError("trotterize_schedule: p must be >= 1");
    validate_schedule(schedule);
    const double t_f = schedule_duration(schedule);
    const double dt = t_f / p;

    QaoaAngles angles;
    angles.gammas.resize(p);
    angles.betas.resize(p);

    auto slice_u_integral = [&](double a, double b) -> double {
        if (const auto* pc = std::get_if<PiecewiseConstant>(&schedule)) {
            const double step = pc->dt();
            double acc = 0;
            const long lo = std::max(0L, static_cast<long>(std::floor(a / step)));
            const long hi = std::min(static_cast<long>(pc->values.size()) - 1,
                                     static_cast<long>(std::ceil(b / step)));
            for (long k = lo; k <= hi; ++k) {
                const double s0 = std::max(a, k * step);
                const double s1 = std::min(b, (k + 1) * step);
                if (s1 > s0) acc += pc->values[k] * (s1 - s0);
            }
            return acc;
        }
        if (const auto* bang = std::get_if<BangSequence>(&schedule)) {
            double acc = 0, t0 = 0;
            for (const auto& seg : bang->segments) {
                const double t1 = t0 + seg.duration;
                if (seg.level == 1) acc += std::max(0.0, std::min(b, t1) - std::max(a, t0));
                t0 = t1;
            }
            return acc;
        }
        const auto& comp = std::get<BabComposite>(schedule);
        std::vector<double> cuts{comp.gamma_bang, comp.t_f - comp.beta_bang};
        const double anneal = comp.t_f - comp.gamma_bang - comp.beta_bang;
        for (double s : comp.base.s) cuts.push_back(comp.gamma_bang + s * anneal);
        const double period =
            comp.osc.amplitude > 0 && comp.osc.omega > 0
                ? 2.0 * std::numbers::pi / comp.osc.omega
                : 0.0;
        return gauss_panels([&](double t) { return std::clamp(comp.value(t), 0.0, 1.0); }, a, b,
                            cuts, period);
    };

    for (int k = 0; k < p; ++k) {
        const double a = k * dt;
        const double b = (k == p - 1) ? t_f : a + dt;  // avoid roundoff spill
        const double beta = slice_u_integral(a, b);
        angles.betas[k] = std::max(0.0, beta);
        angles.gammas[k] = std::max(0.0, (b - a) - beta);
    }
    return angles;
}

}  // namespace aqopt

#include "aqopt/near_adiabatic.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "aqopt/errors.hpp"

namespace aqopt {

namespace {

double wrap_phase(double phi) {
    while (phi > std::numbers::pi) phi -= 2.0 * std::numbers::pi;
    while (phi <= -std::numbers::pi) phi += 2.0 * std::numbers::pi;
    return phi;
}

struct LogLogFit {
    double slope = 0, intercept = 0, r2 = 0;
};

LogLogFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        syy += ly * ly;
    }
    LogLogFit fit;
    const double denom = n * sxx - sx * sx;
    fit.slope = (n * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / n;
    const double ss_tot = syy - sy * sy / n;
    double ss_res = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double pred = fit.intercept + fit.slope * std::log(x[i]);
        const double res = std::log(y[i]) - pred;
        ss_res += res * res;
    }
    fit.r2 = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 0.0;
    return fit;
}

}  // namespace

SpectralFunctions SpectralFunctions::tabulate(const OperatorPair& pair, int grid_points,
                                              double u_lo, double u_hi) {
    if (grid_points < 4) throw ValidationError("SpectralFunctions: need >= 4 grid points");
    std::vector<double> grid(grid_points);
    for (int i = 0; i < grid_points; ++i)
        grid[i] = u_lo + (u_hi - u_lo) * i / (grid_points - 1);
    const auto slices = spectral_profile(pair, grid);

    std::vector<double> gap_v(grid_points), g_v(grid_points), k0_v(grid_points),
        k1_v(grid_points);
    for (int i = 0; i < grid_points; ++i) {
        gap_v[i] = slices[i].gap;
        g_v[i] = slices[i].gamma_me;
        k0_v[i] = slices[i].kappa0;
        k1_v[i] = slices[i].kappa1;
    }
    SpectralFunctions funcs;
    funcs.gap = CubicSpline(grid, gap_v);
    funcs.coupling = CubicSpline(std::vector<double>(grid), std::move(g_v));
    funcs.kappa0 = CubicSpline(std::vector<double>(grid), std::move(k0_v));
    funcs.kappa1 = CubicSpline(std::vector<double>(grid), std::move(k1_v));
    funcs.u_min = u_lo;
    funcs.u_max = u_hi;
    return funcs;
}

std::complex<double> TwoLevelState::c1() const {
    return a1 * std::complex<double>(std::cos(-varphi), std::sin(-varphi));
}

double TwoLevelTrace::varphi(std::size_t i) const {
    return wrap_phase(std::arg(c0[i]) - std::arg(c1[i]));
}

double TwoLevelTrace::conservation_drift() const {
    if (c0.empty()) return 0;
    const double initial = std::norm(c0.front()) + std::norm(c1.front());
    double drift = 0;
    for (std::size_t i = 0; i < c0.size(); ++i)
        drift = std::max(drift, std::abs(std::norm(c0[i]) + std::norm(c1[i]) - initial));
    return drift;
}

TwoLevelTrace integrate_two_level(const SpectralFunctions& funcs, const ControlFn& u0,
                                  const ControlFn& u0_dot, const ControlFn& c, double t_f,
                                  const TwoLevelState& init, double tol) {
    if (!(t_f > 0)) throw ValidationError("integrate_two_level: t_f must be positive");

    using Cplx = std::complex<double>;
    struct Y {
        Cplx y0, y1;
    };

    auto rhs = [&](double t, const Y& y) -> Y {
        const double u = u0(t);
        if (u < funcs.u_min - 1e-9 || u > funcs.u_max + 1e-9)
            throw std::domain_error("integrate_two_level: u0 leaves the tabulated range");
        const double gap = funcs.gap(u);
        if (!(gap > 0)) throw std::domain_error("integrate_two_level: gap collapse");
        const double g = funcs.coupling(u);
        const double k0 = funcs.kappa0(u);
        const double k1 = funcs.kappa1(u);
        const double drive = g * u0_dot(t) / gap;
        const double ct = c ? c(t) : 0.0;
        const Cplx i_unit(0.0, 1.0);
        Y dy;
        dy.y0 = -drive * y.y1 - i_unit * ct * (k0 * y.y0 + g * y.y1);
        dy.y1 = drive * y.y0 - i_unit * gap * y.y1 - i_unit * ct * (g * y.y0 + k1 * y.y1);
        return dy;
    };

    // Dormand-Prince 5(4)
    static const double A[7][6] = {
        {},
        {1.0 / 5},
        {3.0 / 40, 9.0 / 40},
        {44.0 / 45, -56.0 / 15, 32.0 / 9},
        {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
        {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
        {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84}};
    static const double C[7] = {0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
    static const double B5[7] = {35.0 / 384,      0.0,          500.0 / 1113, 125.0 / 192,
                                 -2187.0 / 6784,  11.0 / 84,    0.0};
    static const double B4[7] = {5179.0 / 57600,  0.0,          7571.0 / 16695, 393.0 / 640,
                                 -92097.0 / 339200, 187.0 / 2100, 1.0 / 40};

    TwoLevelTrace trace;
    Y y{init.c0(), init.c1()};
    double t = 0;
    trace.t.push_back(0);
    trace.c0.push_back(y.y0);
    trace.c1.push_back(y.y1);

    double h = t_f / 100.0;
    const double h_min = t_f * 1e-14;
    Y k[7];

    while (t < t_f) {
        h = std::min(h, t_f - t);
        k[0] = rhs(t, y);
        for (int stage = 1; stage < 7; ++stage) {
            Y ys = y;
            for (int j = 0; j < stage; ++j) {
                ys.y0 += h * A[stage][j] * k[j].y0;
                ys.y1 += h * A[stage][j] * k[j].y1;
            }
            k[stage] = rhs(t + C[stage] * h, ys);
        }
        Y y5 = y, y4 = y;
        for (int j = 0; j < 7; ++j) {
            y5.y0 += h * B5[j] * k[j].y0;
            y5.y1 += h * B5[j] * k[j].y1;
            y4.y0 += h * B4[j] * k[j].y0;
            y4.y1 += h * B4[j] * k[j].y1;
        }
        const double sc0 = tol + tol * std::max(std::abs(y.y0), std::abs(y5.y0));
        const double sc1 = tol + tol * std::max(std::abs(y.y1), std::abs(y5.y1));
        const double err = std::sqrt(0.5 * (std::norm((y5.y0 - y4.y0) / sc0) +
                                            std::norm((y5.y1 - y4.y1) / sc1)));
        if (err <= 1.0) {
            t += h;
            y = y5;
            trace.t.push_back(t);
            trace.c0.push_back(y.y0);
            trace.c1.push_back(y.y1);
        }
        const double factor = err > 0 ? 0.9 * std::pow(err, -0.2) : 5.0;
        h *= std::clamp(factor, 0.2, 5.0);
        if (h < h_min) throw std::runtime_error("integrate_two_level: step size underflow");
    }
    return trace;
}

ThetaResult theta0(const SpectralFunctions& funcs, const ControlFn& u0, const ControlFn& u0_dot,
                   const ControlFn& c, const TwoLevelTrace& trace) {
    ThetaResult out;
    const std::size_t n = trace.t.size();
    if (n < 2) return out;
    std::vector<double> integrand(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = trace.t[i];
        const double u = u0(t);
        const double g = funcs.coupling(u);
        const double gap = funcs.gap(u);
        const double phi = trace.varphi(i);
        const double ct = c ? c(t) : 0.0;
        integrand[i] = ct * g * std::sin(phi) + g * u0_dot(t) / gap * std::cos(phi);
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double h = trace.t[i + 1] - trace.t[i];
        out.value += 0.5 * h * (integrand[i] + integrand[i + 1]);
        out.integrand_l1 += 0.5 * h * (std::abs(integrand[i]) + std::abs(integrand[i + 1]));
    }
    return out;
}

ThetaResult theta(const SpectralFunctions& funcs, const std::vector<double>& times,
                  const std::vector<double>& u_values, const std::vector<double>& phases) {
    const std::size_t n = times.size();
    if (u_values.size() != n || phases.size() != n)
        throw ValidationError("theta: inconsistent series lengths");
    ThetaResult out;
    if (n < 3) return out;

    std::vector<double> integrand(n);
    for (std::size_t i = 0; i < n; ++i) {
        double udot;
        if (i == 0)
            udot = (u_values[1] - u_values[0]) / (times[1] - times[0]);
        else if (i + 1 == n)
            udot = (u_values[n - 1] - u_values[n - 2]) / (times[n - 1] - times[n - 2]);
        else
            udot = (u_values[i + 1] - u_values[i - 1]) / (times[i + 1] - times[i - 1]);
        const double u = u_values[i];
        integrand[i] = funcs.coupling(u) * udot / funcs.gap(u) * std::cos(phases[i]);
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double h = times[i + 1] - times[i];
        out.value += 0.5 * h * (integrand[i] + integrand[i + 1]);
        out.integrand_l1 += 0.5 * h * (std::abs(integrand[i]) + std::abs(integrand[i + 1]));
    }
    return out;
}

std::vector<double> perturbative_c(const SpectralFunctions& funcs, const ControlFn& u0,
                                   const ControlFn& u0_dot, const std::vector<double>& times) {
    std::vector<double> out;
    out.reserve(times.size());
    for (double t : times) {
        const double u = u0(t);
        const double gap = funcs.gap(u);
        const double g = funcs.coupling(u);
        if (g == 0.0)
            throw std::domain_error("perturbative_c: coupling crosses zero at u=" +
                                    std::to_string(u));
        const double log_deriv = 2.0 * funcs.gap.deriv(u) / gap - funcs.coupling.deriv(u) / g;
        const double udot = u0_dot(t);
        // Amplitude 2 udot^2/D^2 * dln(D^2/g)/du: the prefactor that zeroes
        // the second-order transition amplitude of the local two-level
        // propagator (verified against paired integrations; see tests).
        out.push_back(2.0 * udot * udot / (gap * gap) * log_deriv * std::cos(gap * t));
    }
    return out;
}

PerturbativeCoeffs perturbative_coeffs(const SpectralFunctions& funcs, double u0_ref,
                                       double u0_dot) {
    PerturbativeCoeffs coeffs;
    coeffs.delta0 = funcs.gap(u0_ref);
    coeffs.delta1 = funcs.gap.deriv(u0_ref);
    coeffs.gamma0 = funcs.coupling(u0_ref);
    coeffs.gamma1 = funcs.coupling.deriv(u0_ref);
    coeffs.u0_dot = u0_dot;
    if (!(coeffs.delta0 > 0)) throw std::domain_error("perturbative_coeffs: gap must be positive");
    if (coeffs.gamma0 == 0.0)
        throw std::domain_error("perturbative_coeffs: coupling vanishes at the reference point");

    const double d0 = coeffs.delta0;
    coeffs.c0 = 2.0 * u0_dot * u0_dot / (d0 * d0) *
                (2.0 * coeffs.delta1 / d0 - coeffs.gamma1 / coeffs.gamma0);
    coeffs.theta_phase = std::numbers::pi / 2.0;
    coeffs.omega = d0;
    coeffs.delta_tf =
        2.0 * std::numbers::pi * std::numbers::pi * coeffs.delta1 * u0_dot / (d0 * d0 * d0);
    coeffs.period = 2.0 * std::numbers::pi / d0 - coeffs.delta_tf;
    return coeffs;
}

LeakageScaling leakage_scaling_experiment(const SpectralFunctions& funcs,
                                          const std::vector<double>& u0_dots, double u0_ref) {
    if (u0_dots.size() < 4)
        throw ValidationError("leakage_scaling_experiment: need >= 4 ramp rates");

    LeakageScaling result;
    result.u0_dots = u0_dots;
    for (double udot : u0_dots) {
        const PerturbativeCoeffs coeffs = perturbative_coeffs(funcs, u0_ref, udot);
        const double t_f = coeffs.period;
        auto u0 = [u0_ref, udot](double t) { return u0_ref + udot * t; };
        auto u0d = [udot](double) { return udot; };
        auto osc = [&coeffs](double t) {
            return coeffs.c0 * std::sin(coeffs.omega * t + coeffs.theta_phase);
        };

        TwoLevelState init;  // ground state
        const auto corrected = integrate_two_level(funcs, u0, u0d, osc, t_f, init);
        const auto plain = integrate_two_level(funcs, u0, u0d, nullptr, t_f, init);
        result.leak_corrected.push_back(
            std::abs(corrected.a1(corrected.t.size() - 1) - corrected.a1(0)));
        result.leak_uncorrected.push_back(std::abs(plain.a1(plain.t.size() - 1) - plain.a1(0)));
    }

    const LogLogFit fit_c = fit_loglog(result.u0_dots, result.leak_corrected);
    const LogLogFit fit_u = fit_loglog(result.u0_dots, result.leak_uncorrected);
    result.slope_corrected = fit_c.slope;
    result.slope_uncorrected = fit_u.slope;
    result.r2_corrected = fit_c.r2;
    result.r2_uncorrected = fit_u.r2;
    result.conclusive = fit_c.r2 >= 0.99 && fit_u.r2 >= 0.99;
    return result;
}

}  // namespace aqopt

#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "aqopt/operators.hpp"
#include "aqopt/spline.hpp"

namespace aqopt {

using ControlFn = std::function<double(double)>;  // of time

// Instantaneous gap and coupling data tabulated over u and interpolated by
// cubic splines, with analytic derivatives for the perturbative formulas.
struct SpectralFunctions {
    CubicSpline gap;       // Delta(u)
    CubicSpline coupling;  // gamma(u) = <0|(B-C)|1>
    CubicSpline kappa0;    // <0|(B-C)|0>
    CubicSpline kappa1;    // <1|(B-C)|1>
    double u_min = 0, u_max = 1;

    static SpectralFunctions tabulate(const OperatorPair& pair, int grid_points = 201,
                                      double u_lo = 0.0, double u_hi = 1.0);
};

// Amplitude/phase view of the two lowest instantaneous amplitudes:
// C0 = a0 e^{i phi0}, C1 = a1 e^{i phi1}, varphi = phi0 - phi1.
struct TwoLevelState {
    double a0 = 1.0;
    double a1 = 0.0;
    double varphi = 0.0;

    std::complex<double> c0() const { return {a0, 0.0}; }
    std::complex<double> c1() const;
};

struct TwoLevelTrace {
    std::vector<double> t;
    std::vector<std::complex<double>> c0, c1;

    double a0(std::size_t i) const { return std::abs(c0[i]); }
    double a1(std::size_t i) const { return std::abs(c1[i]); }
    double varphi(std::size_t i) const;  // principal arg(c0)-arg(c1)
    double conservation_drift() const;   // max |(|c0|^2+|c1|^2) - initial|
};

// Adaptive Dormand-Prince integration of the two-level equations in the
// eigenframe of the base schedule u0(t):
//   dC0/dt = -(g udot/D) C1 - i c (k0 C0 + g C1)
//   dC1/dt = +(g udot/D) C0 - i D C1 - i c (g C0 + k1 C1)
// with D, g, k evaluated at u0(t). The complex form is integrated directly;
// the amplitude/phase split has a removable singularity at a1 = 0 that this
// avoids. Pass c = nullptr for no oscillation.
TwoLevelTrace integrate_two_level(const SpectralFunctions& funcs, const ControlFn& u0,
                                  const ControlFn& u0_dot, const ControlFn& c, double t_f,
                                  const TwoLevelState& init, double tol = 1e-10);

struct ThetaResult {
    double value = 0;
    double integrand_l1 = 0;
};

// Accumulated mixing integral int (c g sin(varphi) + g u0dot/D cos(varphi)) dt
// over the trace grid (trapezoid).
ThetaResult theta0(const SpectralFunctions& funcs, const ControlFn& u0, const ControlFn& u0_dot,
                   const ControlFn& c, const TwoLevelTrace& trace);

// Adiabatic-frame functional int g(u) udot cos(varphi) / D(u) dt for sampled
// u(t) and phase history; udot by centered differences.
ThetaResult theta(const SpectralFunctions& funcs, const std::vector<double>& times,
                  const std::vector<double>& u_values, const std::vector<double>& phases);

// Leakage-cancelling oscillation evaluated pointwise:
//   c(t) = (u0dot^2 / D^2) d/du[ln(D^2/g)] cos(D(u0(t)) t)
std::vector<double> perturbative_c(const SpectralFunctions& funcs, const ControlFn& u0,
                                   const ControlFn& u0_dot, const std::vector<double>& times);

struct PerturbativeCoeffs {
    double delta0 = 0, delta1 = 0;  // gap and its u-derivative at the reference point
    double gamma0 = 0, gamma1 = 0;  // coupling and its u-derivative
    double u0_dot = 0;
    double c0 = 0;          // oscillation amplitude
    double theta_phase = 0; // pi/2: the sine ansatz reduces to a cosine
    double omega = 0;       // delta0
    double delta_tf = 0;    // period shortening, first order in u0_dot
    double period = 0;      // 2 pi / delta0 - delta_tf
};

// Local Taylor data of (gap, coupling) about u0_ref and the induced
// oscillation parameters:
//   c0 = (u0dot^2/D0^2)(2 D1/D0 - g1/g0),  delta_tf = 2 pi^2 D1 u0dot / D0^3.
PerturbativeCoeffs perturbative_coeffs(const SpectralFunctions& funcs, double u0_ref,
                                       double u0_dot);

struct LeakageScaling {
    std::vector<double> u0_dots;
    std::vector<double> leak_corrected;    // |A1(T) - A1(0)| with the oscillation
    std::vector<double> leak_uncorrected;  // same with c = 0
    double slope_corrected = 0, slope_uncorrected = 0;
    double r2_corrected = 0, r2_uncorrected = 0;
    bool conclusive = false;  // both fits with R^2 >= 0.99
};

// One corrected period per ramp rate, with and without the oscillation;
// log-log slope fit of the end-of-period population transfer.
LeakageScaling leakage_scaling_experiment(const SpectralFunctions& funcs,
                                          const std::vector<double>& u0_dots,
                                          double u0_ref = 0.5);

}  // namespace aqopt

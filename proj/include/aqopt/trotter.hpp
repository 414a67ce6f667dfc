#pragma once

#include <vector>

#include "aqopt/evolve.hpp"
#include "aqopt/operators.hpp"
#include "aqopt/schedule.hpp"

namespace aqopt {

// Product-formula error bound inputs. The control is
//   u(t) = u0(t/t_f) - c0 sin(2 pi t / tau + phi)
// split into p slices of width delta_t = t_f / p.
struct TrotterBoundConfig {
    double t_f = 0;
    int p = 1;
    double tau = 0;  // oscillation period
    double c0 = 0;   // oscillation amplitude, in [0, 0.5]
    double phi = 0;
    Curve u0;                    // base schedule as a function of t/t_f
    double commutator_norm = 1;  // ||[B,C]||

    double delta_t() const { return t_f / p; }
    double control(double t) const;
    void validate() const;
};

// Spectral norm of [B,C] via the dense symmetric eigenproblem of M^T M,
// M = BC - CB.
double commutator_norm(const OperatorPair& pair);

// ||[B,C]|| * sum_k  int_{slice k} ds (1-u(s)) int_{k dt}^{s} dr u(r),
// Gauss-Legendre with knot-aware panels, quadrature error < 1e-10 relative.
// Requires u in [0,1] everywhere.
double bound_double_integral(const TrotterBoundConfig& config);

// Matched-period closed form (requires tau == delta_t): the oscillation
// decouples, leaving the c0 = 0 double integral minus
// ||[B,C]|| c0 dt^2 p cos(phi) / (2 pi).
double bound_closed_form(const TrotterBoundConfig& config);

// Coarse matched-period bound ||[B,C]|| (dt^2 p / 2)(1 - c0 cos(phi)/pi).
double bound_closed_form_coarse(const TrotterBoundConfig& config);

struct TrotterScanRow {
    int p = 0;
    double delta_t = 0;
    double bound_osc = 0;
    double bound_no_osc = 0;

    double enhancement() const {
        return bound_no_osc > 0 ? (bound_no_osc - bound_osc) / bound_no_osc : 0.0;
    }
};

// Bound with and without the oscillation for each slice count.
std::vector<TrotterScanRow> scan_p(double norm, double t_f, double tau, double c0, double phi,
                                   int p_min, int p_max, const Curve& u0);

struct EpsilonScanRow {
    double eps = 0;
    double bound = 0;         // with the oscillation
    double bound_no_osc = 0;  // same slicing, c0 = 0

    // Oscillation-induced part of the bound; the slice-size dependence of
    // the base-curve error cancels here, which is the quantity whose
    // extremum at eps = 0 the mismatch analysis concerns.
    double enhancement() const { return bound - bound_no_osc; }
};

// Bound versus the slice/period mismatch delta_t = tau + eps at fixed
// oscillation period tau and slice count p: the integration span becomes
// p (tau + eps) and the base curve stretches with it.
std::vector<EpsilonScanRow> epsilon_scan(const TrotterBoundConfig& config,
                                         const std::vector<double>& eps_values);

// Per-slice integrals of u and 1-u as B- and C-bang durations; total time
// is preserved exactly.
QaoaAngles trotterize_schedule(const Schedule& schedule, int p);

}  // namespace aqopt

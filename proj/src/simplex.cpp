#include "aqopt/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace aqopt {

SimplexResult nelder_mead(const Objective& f, const std::vector<double>& x0,
                          const SimplexOptions& opts) {
    const std::size_t n = x0.size();
    if (n == 0) throw std::invalid_argument("nelder_mead: empty start point");

    const double alpha = 1.0, gamma = 2.0, rho = 0.5, sigma = 0.5;

    std::vector<std::vector<double>> xs(n + 1, x0);
    for (std::size_t i = 0; i < n; ++i) {
        double step = opts.init_steps.empty() ? opts.init_step : opts.init_steps[i];
        if (step == 0.0) step = opts.init_step;
        xs[i + 1][i] += step;
    }

    int evals = 0;
    std::vector<double> fs(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        fs[i] = f(xs[i]);
        ++evals;
    }

    std::vector<std::size_t> order(n + 1);
    auto sort_simplex = [&] {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return fs[a] < fs[b]; });
    };

    std::vector<double> centroid(n), xr(n), xe(n), xc(n);
    bool converged = false;

    while (evals < opts.max_evals) {
        sort_simplex();
        const std::size_t best = order[0], worst = order[n], second_worst = order[n - 1];

        double fspread = std::abs(fs[worst] - fs[best]);
        double xspread = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            xspread = std::max(xspread, std::abs(xs[worst][i] - xs[best][i]));
        if (fspread <= opts.f_tol && xspread <= opts.x_tol) {
            converged = true;
            break;
        }

        std::fill(centroid.begin(), centroid.end(), 0.0);
        for (std::size_t k = 0; k <= n; ++k) {
            if (k == worst) continue;
            for (std::size_t i = 0; i < n; ++i) centroid[i] += xs[k][i];
        }
        for (double& ci : centroid) ci /= static_cast<double>(n);

        for (std::size_t i = 0; i < n; ++i) xr[i] = centroid[i] + alpha * (centroid[i] - xs[worst][i]);
        const double fr = f(xr);
        ++evals;

        if (fr < fs[best]) {
            for (std::size_t i = 0; i < n; ++i) xe[i] = centroid[i] + gamma * (xr[i] - centroid[i]);
            const double fe = f(xe);
            ++evals;
            if (fe < fr) {
                xs[worst] = xe;
                fs[worst] = fe;
            } else {
                xs[worst] = xr;
                fs[worst] = fr;
            }
        } else if (fr < fs[second_worst]) {
            xs[worst] = xr;
            fs[worst] = fr;
        } else {
            const bool outside = fr < fs[worst];
            const std::vector<double>& towards = outside ? xr : xs[worst];
            for (std::size_t i = 0; i < n; ++i) xc[i] = centroid[i] + rho * (towards[i] - centroid[i]);
            const double fc = f(xc);
            ++evals;
            if (fc < (outside ? fr : fs[worst])) {
                xs[worst] = xc;
                fs[worst] = fc;
            } else {
                for (std::size_t k = 0; k <= n; ++k) {
                    if (k == best) continue;
                    for (std::size_t i = 0; i < n; ++i)
                        xs[k][i] = xs[best][i] + sigma * (xs[k][i] - xs[best][i]);
                    fs[k] = f(xs[k]);
                    ++evals;
                }
            }
        }
    }

    sort_simplex();
    SimplexResult res;
    res.x = xs[order[0]];
    res.value = fs[order[0]];
    res.evals = evals;
    res.converged = converged;
    return res;
}

SimplexResult coordinate_polish(const Objective& f, const std::vector<double>& x0, double radius,
                                int evals_per_coord) {
    static const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
    SimplexResult res;
    res.x = x0;
    res.value = f(res.x);
    res.evals = 1;

    for (std::size_t i = 0; i < x0.size(); ++i) {
        double lo = res.x[i] - radius, hi = res.x[i] + radius;
        auto eval_at = [&](double v) {
            std::vector<double> x = res.x;
            x[i] = v;
            ++res.evals;
            return f(x);
        };
        double a = hi - inv_phi * (hi - lo), b = lo + inv_phi * (hi - lo);
        double fa = eval_at(a), fb = eval_at(b);
        for (int k = 2; k < evals_per_coord; ++k) {
            if (fa < fb) {
                hi = b;
                b = a;
                fb = fa;
                a = hi - inv_phi * (hi - lo);
                fa = eval_at(a);
            } else {
                lo = a;
                a = b;
                fa = fb;
                b = lo + inv_phi * (hi - lo);
                fb = eval_at(b);
            }
        }
        const double xbest = fa < fb ? a : b;
        const double fbest = std::min(fa, fb);
        if (fbest < res.value) {
            res.x[i] = xbest;
            res.value = fbest;
        }
    }
    res.converged = true;
    return res;
}

}  // namespace aqopt

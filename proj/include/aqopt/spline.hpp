#pragma once

#include <cstddef>
#include <vector>

namespace aqopt {

// Natural cubic spline on strictly increasing knots, with an analytic
// derivative of the interpolant. Evaluation outside the knot range is a
// linear continuation of the boundary piece.
class CubicSpline {
  public:
    CubicSpline() = default;
    CubicSpline(std::vector<double> x, std::vector<double> y);

    double operator()(double x) const { return eval(x); }
    double eval(double x) const;
    double deriv(double x) const;

    double x_min() const { return x_.front(); }
    double x_max() const { return x_.back(); }
    bool empty() const { return x_.empty(); }

  private:
    std::size_t segment(double x) const;

    std::vector<double> x_, y_;
    std::vector<double> b_, c_, d_;  // y + b*dx + c*dx^2 + d*dx^3 per segment
};

}  // namespace aqopt

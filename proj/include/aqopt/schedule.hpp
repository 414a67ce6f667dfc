#pragma once

#include <variant>
#include <vector>

namespace aqopt {

// Control value per uniform step over [0, t_f]; step k covers
// [k*t_f/N, (k+1)*t_f/N].
struct PiecewiseConstant {
    double t_f = 0;
    std::vector<double> values;

    double dt() const { return t_f / static_cast<double>(values.size()); }
    double at_time(double t) const;
    void validate() const;  // t_f > 0, values in [0,1]
};

// Alternating pinned segments: level 0 holds u=0 (pure problem operator),
// level 1 holds u=1 (pure mixer).
struct BangSegment {
    int level = 0;  // 0 or 1
    double duration = 0;
};

struct BangSequence {
    std::vector<BangSegment> segments;

    double total_time() const;
    void validate() const;
};

// Superposed oscillation in the canonical form c(t) = -amplitude *
// sin(omega*t + phase), t absolute. A * cos(w t + p) is the same thing with
// phase p - pi/2.
struct OscillationParams {
    double amplitude = 0;  // >= 0
    double omega = 0;      // rad / time, > 0 when amplitude > 0
    double phase = 0;

    double value(double t) const;

    static OscillationParams from_cosine(double amplitude, double omega, double phase_cos);
};

// Piecewise-linear curve v(s) on [0,1], used both for resampled base
// schedules and extracted layer-ratio curves.
struct Curve {
    std::vector<double> s;  // strictly increasing, s.front()=0, s.back()=1
    std::vector<double> v;

    double at(double s_query) const;
    void validate() const;
};

// Bang-anneal-bang composite: u=0 on [0, gamma_bang], the rescaled base
// curve plus oscillation on the interior, u=1 on [t_f - beta_bang, t_f].
// When layer_periods is nonempty the oscillation frequency is piecewise,
// one full oscillation per listed period (rescaled to fill the interior),
// with the phase accumulated continuously.
struct BabComposite {
    double gamma_bang = 0;  // initial u=0 bang length
    Curve base;
    OscillationParams osc;
    double beta_bang = 0;  // final u=1 bang length
    double t_f = 0;
    std::vector<double> layer_periods;

    // Raw (unclamped) control value; bang plateaus are exact.
    double value(double t) const;
    void validate() const;
};

using Schedule = std::variant<PiecewiseConstant, BangSequence, BabComposite>;

double schedule_duration(const Schedule& schedule);
void validate_schedule(const Schedule& schedule);

struct SampledSchedule {
    PiecewiseConstant pc;
    int clamp_count = 0;  // samples pushed back into [0,1]
};

// Midpoint-sample any schedule onto n_steps uniform steps. Out-of-range
// composite samples are clamped and counted, never rejected.
SampledSchedule sample_schedule(const Schedule& schedule, int n_steps);

}  // namespace aqopt

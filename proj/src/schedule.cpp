#include "aqopt/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "aqopt/errors.hpp"

namespace aqopt {

double PiecewiseConstant::at_time(double t) const {
    const long n = static_cast<long>(values.size());
    long k = static_cast<long>(std::floor(t / t_f * static_cast<double>(n)));
    k = std::clamp(k, 0L, n - 1);
    return values[k];
}

void PiecewiseConstant::validate() const {
    if (!(t_f > 0)) throw ValidationError("schedule: t_f must be positive");
    if (values.empty()) throw ValidationError("schedule: no steps");
    for (double v : values)
        if (!(v >= 0.0 && v <= 1.0))
            throw ValidationError("schedule: control value " + std::to_string(v) +
                                  " outside [0,1]");
}

double BangSequence::total_time() const {
    double total = 0;
    for (const auto& seg : segments) total += seg.duration;
    return total;
}

void BangSequence::validate() const {
    if (segments.empty()) throw ValidationError("bang sequence: empty");
    for (const auto& seg : segments) {
        if (seg.level != 0 && seg.level != 1)
            throw ValidationError("bang sequence: level must be 0 or 1");
        if (!(seg.duration >= 0)) throw ValidationError("bang sequence: negative duration");
    }
    if (!(total_time() > 0)) throw ValidationError("bang sequence: zero total time");
}

double OscillationParams::value(double t) const {
    if (amplitude == 0.0) return 0.0;
    return -amplitude * std::sin(omega * t + phase);
}

OscillationParams OscillationParams::from_cosine(double amplitude, double omega,
                                                 double phase_cos) {
    // A cos(w t + p) == -A sin(w t + p - pi/2)
    OscillationParams osc;
    osc.amplitude = amplitude;
    osc.omega = omega;
    osc.phase = phase_cos - std::numbers::pi / 2.0;
    return osc;
}

double Curve::at(double s_query) const {
    if (s.size() < 2) throw ValidationError("curve: need >= 2 knots");
    if (s_query <= s.front()) return v.front();
    if (s_query >= s.back()) return v.back();
    auto it = std::upper_bound(s.begin(), s.end(), s_query);
    const std::size_t j = static_cast<std::size_t>(it - s.begin()) - 1;
    const double w = (s_query - s[j]) / (s[j + 1] - s[j]);
    return v[j] + w * (v[j + 1] - v[j]);
}

void Curve::validate() const {
    if (s.size() < 2 || s.size() != v.size()) throw ValidationError("curve: need >= 2 knots");
    for (std::size_t i = 1; i < s.size(); ++i)
        if (!(s[i] > s[i - 1])) throw ValidationError("curve: knots must increase");
}

double BabComposite::value(double t) const {
    if (t <= gamma_bang) return 0.0;
    if (t >= t_f - beta_bang) return 1.0;
    const double anneal_len = t_f - gamma_bang - beta_bang;
    const double s = (t - gamma_bang) / anneal_len;
    double v = base.at(s);

    if (layer_periods.empty()) {
        v += osc.value(t);
    } else if (osc.amplitude != 0.0) {
        // Per-layer frequency: oscillation j completes one full cycle over
        // layer_periods[j] rescaled so the listed periods tile the anneal.
        double total = 0;
        for (double p : layer_periods) total += p;
        const double scale = anneal_len / total;
        double t_local = t - gamma_bang;
        double phase_acc = 0;
        for (double p : layer_periods) {
            const double seg = p * scale;
            if (t_local <= seg || &p == &layer_periods.back()) {
                const double theta =
                    phase_acc + 2.0 * std::numbers::pi * (t_local / seg) + osc.phase;
                // canonical -A sin(theta) with theta accumulated across layers
                v += -osc.amplitude * std::sin(theta);
                break;
            }
            t_local -= seg;
            phase_acc += 2.0 * std::numbers::pi;
        }
    }
    return v;
}

void BabComposite::validate() const {
    base.validate();
    if (!(t_f > 0)) throw ValidationError("composite: t_f must be positive");
    if (gamma_bang < 0 || beta_bang < 0)
        throw ValidationError("composite: bang lengths must be >= 0");
    if (gamma_bang + beta_bang >= t_f)
        throw ValidationError("composite: bangs leave no interior");
    if (osc.amplitude < 0) throw ValidationError("composite: negative oscillation amplitude");
    if (osc.amplitude > 0 && !(osc.omega > 0) && layer_periods.empty())
        throw ValidationError("composite: oscillation frequency must be positive");
}

double schedule_duration(const Schedule& schedule) {
    return std::visit(
        [](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, PiecewiseConstant>)
                return s.t_f;
            else if constexpr (std::is_same_v<T, BangSequence>)
                return s.total_time();
            else
                return s.t_f;
        },
        schedule);
}

void validate_schedule(const Schedule& schedule) {
    std::visit([](const auto& s) { s.validate(); }, schedule);
}

SampledSchedule sample_schedule(const Schedule& schedule, int n_steps) {
    if (n_steps < 1) throw ValidationError("sample_schedule: need >= 1 step");
    validate_schedule(schedule);

    const double t_f = schedule_duration(schedule);
    SampledSchedule out;
    out.pc.t_f = t_f;
    out.pc.values.resize(n_steps);
    const double dt = t_f / n_steps;

    if (const auto* pc = std::get_if<PiecewiseConstant>(&schedule)) {
        for (int k = 0; k < n_steps; ++k) out.pc.values[k] = pc->at_time((k + 0.5) * dt);
        return out;
    }
    if (const auto* bang = std::get_if<BangSequence>(&schedule)) {
        for (int k = 0; k < n_steps; ++k) {
            const double t = (k + 0.5) * dt;
            double acc = 0;
            double level = bang->segments.back().level;
            for (const auto& seg : bang->segments) {
                acc += seg.duration;
                if (t < acc) {
                    level = seg.level;
                    break;
                }
            }
            out.pc.values[k] = level;
        }
        return out;
    }

    const auto& comp = std::get<BabComposite>(schedule);
    for (int k = 0; k < n_steps; ++k) {
        double v = comp.value((k + 0.5) * dt);
        if (v < 0.0) {
            v = 0.0;
            ++out.clamp_count;
        } else if (v > 1.0) {
            v = 1.0;
            ++out.clamp_count;
        }
        out.pc.values[k] = v;
    }
    return out;
}

}  // namespace aqopt

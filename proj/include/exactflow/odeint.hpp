#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "exactflow/errors.hpp"
#include "exactflow/roots.hpp"

namespace exactflow {

template <std::size_t N>
using StateVec = std::array<double, N>;

enum class Termination { reached_end, singularity, non_finite, step_underflow };

inline std::string_view to_string(Termination t) {
    switch (t) {
        case Termination::reached_end: return "reached_end";
        case Termination::singularity: return "singularity";
        case Termination::non_finite: return "non_finite";
        case Termination::step_underflow: return "step_underflow";
    }
    return "unknown";
}

struct StepPolicy {
    enum class Mode { fixed, adaptive };

    Mode mode = Mode::fixed;
    double step = 1e-3;
    double rtol = 1e-10;
    double atol = 1e-12;

    static StepPolicy fixed(double h) { return {Mode::fixed, h, 0.0, 0.0}; }
    static StepPolicy adaptive(double initial_step, double rtol = 1e-10, double atol = 1e-12) {
        return {Mode::adaptive, initial_step, rtol, atol};
    }
};

template <std::size_t N>
struct Trajectory {
    std::vector<double> t;
    std::vector<StateVec<N>> y;
    Termination reason = Termination::reached_end;
    std::string detail;

    bool completed() const { return reason == Termination::reached_end; }
    std::size_t size() const { return t.size(); }
};

// Tracks labeled scalar functions of (state, t) and their largest deviation
// from the value at the first observation, relative to max(|reference|,
// scale) where the optional scale is also taken at the first observation.
template <std::size_t N>
class InvariantMonitor {
public:
    using Fn = std::function<double(const StateVec<N>&, double)>;

    struct Entry {
        std::string label;
        Fn fn;
        Fn scale;
        double reference = 0.0;
        double denominator = 1.0;
        double max_drift = 0.0;
        bool seeded = false;
    };

    void add(std::string label, Fn fn, Fn scale = {}) {
        entries_.push_back({std::move(label), std::move(fn), std::move(scale)});
    }

    void observe(const StateVec<N>& y, double t) {
        for (auto& e : entries_) {
            const double value = e.fn(y, t);
            if (!e.seeded) {
                e.reference = value;
                e.seeded = true;
                e.denominator = std::max(std::fabs(value), e.scale ? std::fabs(e.scale(y, t)) : 0.0);
                if (!(e.denominator > 0.0)) e.denominator = 1.0;
                continue;
            }
            e.max_drift = std::max(e.max_drift, std::fabs(value - e.reference) / e.denominator);
        }
    }

    double drift(std::string_view label) const {
        for (const auto& e : entries_)
            if (e.label == label) return e.max_drift;
        throw ConfigError("InvariantMonitor: unknown invariant " + std::string(label));
    }

    double max_drift() const {
        double out = 0.0;
        for (const auto& e : entries_) out = std::max(out, e.max_drift);
        return out;
    }

    const std::vector<Entry>& entries() const { return entries_; }

private:
    std::vector<Entry> entries_;
};

namespace detail {

template <std::size_t N>
bool all_finite(const StateVec<N>& y) {
    return std::all_of(y.begin(), y.end(), [](double v) { return std::isfinite(v); });
}

template <std::size_t N>
StateVec<N> axpy(const StateVec<N>& y, double a, const StateVec<N>& k) {
    StateVec<N> out;
    for (std::size_t i = 0; i < N; ++i) out[i] = y[i] + a * k[i];
    return out;
}

template <std::size_t N, class Rhs>
StateVec<N> rk4_step(Rhs& rhs, double t, const StateVec<N>& y, double h) {
    const StateVec<N> k1 = rhs(t, y);
    const StateVec<N> k2 = rhs(t + 0.5 * h, axpy(y, 0.5 * h, k1));
    const StateVec<N> k3 = rhs(t + 0.5 * h, axpy(y, 0.5 * h, k2));
    const StateVec<N> k4 = rhs(t + h, axpy(y, h, k3));
    StateVec<N> out;
    for (std::size_t i = 0; i < N; ++i) out[i] = y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    return out;
}

enum class StepOutcome { ok, singular, non_finite };

template <std::size_t N, class Rhs>
StepOutcome try_step(Rhs& rhs, double t, const StateVec<N>& y, double h, StateVec<N>& out, std::string& why) {
    try {
        out = rk4_step<N>(rhs, t, y, h);
    } catch (const SingularityError& e) {
        why = e.what();
        return StepOutcome::singular;
    } catch (const DomainError& e) {
        why = e.what();
        return StepOutcome::singular;
    }
    if (!all_finite(out)) {
        why = "non-finite state";
        return StepOutcome::non_finite;
    }
    return StepOutcome::ok;
}

}  // namespace detail

// Classic RK4 from span.lo to span.hi (either direction). Fixed mode uses the
// given step, shortening the last one to land on span.hi. Adaptive mode uses
// step doubling and accepts a step once |y_h - y_{h/2}| <= rtol |y| + atol
// componentwise, keeping the extrapolated value. A failing step (rhs throws a singularity or domain error,
// or produces non-finite values) is bisected; once the step falls below
// 1e-14 |span| the integration stops with the corresponding reason.
template <std::size_t N, class Rhs>
Trajectory<N> integrate(Rhs&& rhs, const StateVec<N>& y0, Interval span, const StepPolicy& policy,
                        InvariantMonitor<N>* monitor = nullptr) {
    const double length = span.hi - span.lo;
    if (!(std::fabs(length) > 0.0) || !std::isfinite(length)) throw DomainError("integrate: degenerate span");
    if (!(policy.step > 0.0)) throw DomainError("integrate: step must be positive");
    if (!detail::all_finite(y0)) throw DomainError("integrate: non-finite initial state");

    const double dir = length > 0.0 ? 1.0 : -1.0;
    const double min_step = 1e-14 * std::fabs(length);

    Trajectory<N> traj;
    traj.t.push_back(span.lo);
    traj.y.push_back(y0);
    if (monitor) monitor->observe(y0, span.lo);

    double t = span.lo;
    StateVec<N> y = y0;
    double h = std::min(policy.step, std::fabs(length));
    auto remaining = [&] { return dir * (span.hi - t); };

    StateVec<N> full, half, two_half;
    std::string why;
    Termination last_failure = Termination::step_underflow;
    while (remaining() > min_step) {
        h = std::min(h, remaining());
        if (h < min_step) break;
        const double dt = dir * h;
        auto outcome = detail::try_step<N>(rhs, t, y, dt, full, why);
        bool accepted = false;
        double next_h = h;
        if (outcome == detail::StepOutcome::ok && policy.mode == StepPolicy::Mode::adaptive) {
            outcome = detail::try_step<N>(rhs, t, y, 0.5 * dt, half, why);
            if (outcome == detail::StepOutcome::ok)
                outcome = detail::try_step<N>(rhs, t + 0.5 * dt, half, 0.5 * dt, two_half, why);
            if (outcome == detail::StepOutcome::ok) {
                double err = 0.0;
                for (std::size_t i = 0; i < N; ++i) {
                    const double tol = policy.rtol * std::max(std::fabs(two_half[i]), std::fabs(y[i])) + policy.atol;
                    err = std::max(err, std::fabs(two_half[i] - full[i]) / tol);
                }
                const double factor = err > 0.0 ? 0.9 * std::pow(err, -0.2) : 5.0;
                next_h = h * std::clamp(factor, 0.2, 5.0);
                if (err <= 1.0) {
                    // local extrapolation
                    for (std::size_t i = 0; i < N; ++i) full[i] = two_half[i] + (two_half[i] - full[i]) / 15.0;
                    if (!detail::all_finite(full)) full = two_half;
                    accepted = true;
                } else if (next_h < min_step) {
                    traj.reason = Termination::step_underflow;
                    traj.detail = "adaptive step fell below 1e-14 of the span";
                    return traj;
                }
            }
        } else if (outcome == detail::StepOutcome::ok) {
            accepted = true;
        }

        if (outcome != detail::StepOutcome::ok) {
            last_failure = outcome == detail::StepOutcome::singular ? Termination::singularity : Termination::non_finite;
            h *= 0.5;
            if (h < min_step) {
                traj.reason = last_failure;
                traj.detail = why;
                return traj;
            }
            continue;
        }
        if (!accepted) {
            h = next_h;
            continue;
        }
        t = (remaining() - h <= min_step) ? span.hi : t + dt;
        y = full;
        traj.t.push_back(t);
        traj.y.push_back(y);
        if (monitor) monitor->observe(y, t);
        if (policy.mode == StepPolicy::Mode::adaptive) h = next_h;
    }
    traj.reason = Termination::reached_end;
    return traj;
}

// Piecewise cubic Hermite interpolation of a trajectory, using the rhs for
// node derivatives. Fourth-order accurate on RK4 output.
template <std::size_t N>
class HermiteInterpolant {
public:
    template <class Rhs>
    HermiteInterpolant(const Trajectory<N>& traj, Rhs&& rhs) : t_(traj.t), y_(traj.y) {
        if (t_.size() < 2) throw DomainError("HermiteInterpolant: need at least two samples");
        dy_.reserve(t_.size());
        for (std::size_t i = 0; i < t_.size(); ++i) dy_.push_back(rhs(t_[i], y_[i]));
        ascending_ = t_.back() > t_.front();
    }

    Interval domain() const {
        return ascending_ ? Interval{t_.front(), t_.back()} : Interval{t_.back(), t_.front()};
    }

    StateVec<N> operator()(double t) const {
        const Interval d = domain();
        if (!(t >= d.lo && t <= d.hi)) throw DomainError("HermiteInterpolant: outside trajectory range");
        std::size_t i;
        if (ascending_) {
            auto it = std::upper_bound(t_.begin(), t_.end(), t);
            i = it == t_.end() ? t_.size() - 2 : static_cast<std::size_t>(std::max<std::ptrdiff_t>(it - t_.begin() - 1, 0));
        } else {
            auto it = std::upper_bound(t_.begin(), t_.end(), t, std::greater<double>());
            i = it == t_.end() ? t_.size() - 2 : static_cast<std::size_t>(std::max<std::ptrdiff_t>(it - t_.begin() - 1, 0));
        }
        i = std::min(i, t_.size() - 2);
        const double h = t_[i + 1] - t_[i];
        const double s = (t - t_[i]) / h;
        const double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
        const double h10 = s * (1 - s) * (1 - s);
        const double h01 = s * s * (3 - 2 * s);
        const double h11 = s * s * (s - 1);
        StateVec<N> out;
        for (std::size_t k = 0; k < N; ++k)
            out[k] = h00 * y_[i][k] + h10 * h * dy_[i][k] + h01 * y_[i + 1][k] + h11 * h * dy_[i + 1][k];
        return out;
    }

private:
    std::vector<double> t_;
    std::vector<StateVec<N>> y_;
    std::vector<StateVec<N>> dy_;
    bool ascending_ = true;
};

}  // namespace exactflow

#include "exactflow/streamtrace.hpp"

#include <cmath>
#include <optional>

namespace exactflow {

std::string_view to_string(TraceEnd e) {
    switch (e) {
        case TraceEnd::reached_end: return "reached_end";
        case TraceEnd::stagnation: return "stagnation";
        case TraceEnd::domain_exit: return "domain_exit";
        case TraceEnd::singularity: return "singularity";
        case TraceEnd::non_finite: return "non_finite";
        case TraceEnd::step_underflow: return "step_underflow";
    }
    return "unknown";
}

StreamCurve trace_velocity(const VelocityField& velocity, const Point3& seed, Interval span,
                           const TraceOptions& options) {
    std::optional<TraceEnd> failure;
    auto rhs = [&](double, const StateVec<3>& y) -> StateVec<3> {
        const Point3 p{y[0], y[1], y[2]};
        if (options.inside && !options.inside(p)) {
            failure = TraceEnd::domain_exit;
            throw DomainError("trace: left the domain");
        }
        Vec3 vel;
        try {
            vel = velocity(p);
        } catch (const SingularityError&) {
            failure = TraceEnd::singularity;
            throw;
        } catch (const DomainError&) {
            failure = TraceEnd::domain_exit;
            throw;
        }
        if (!is_finite(vel)) return {vel.x, vel.y, vel.z};
        const double speed = norm(vel);
        if (!(speed >= options.stagnation_speed)) {
            failure = TraceEnd::stagnation;
            throw SingularityError("trace: stagnation point");
        }
        if (options.arclength) vel = vel * (1.0 / speed);
        return {vel.x, vel.y, vel.z};
    };

    if (options.inside && !options.inside(seed)) throw DomainError("trace: seed outside the domain");
    const Vec3 v0 = velocity(seed);
    if (!is_finite(v0)) throw DomainError("trace: non-finite velocity at seed");
    if (!(norm(v0) >= options.stagnation_speed)) throw SingularityError("trace: stagnation at seed");

    const auto traj = integrate<3>(rhs, StateVec<3>{seed.x, seed.y, seed.z}, span, options.policy);
    StreamCurve curve;
    curve.parameter = traj.t;
    curve.points.reserve(traj.y.size());
    for (const auto& y : traj.y) curve.points.push_back({y[0], y[1], y[2]});
    switch (traj.reason) {
        case Termination::reached_end: curve.reason = TraceEnd::reached_end; break;
        case Termination::singularity: curve.reason = failure.value_or(TraceEnd::singularity); break;
        case Termination::non_finite: curve.reason = TraceEnd::non_finite; break;
        case Termination::step_underflow: curve.reason = TraceEnd::step_underflow; break;
    }
    curve.detail = traj.detail;
    return curve;
}

StreamCurve trace(const std::function<FlowState(const Point3&)>& field, const Point3& seed, Interval span,
                  const TraceOptions& options) {
    return trace_velocity([&](const Point3& p) { return field(p).velocity(); }, seed, span, options);
}

StreamCurve trace_axisym(const std::function<FlowState(double, double)>& field, double z0, double r0, Interval span,
                         const TraceOptions& options) {
    auto velocity = [&](const Point3& p) {
        const FlowState s = field(p.x, p.y);
        return Vec3{s.u(), s.v(), 0.0};
    };
    return trace_velocity(velocity, {z0, r0, 0.0}, span, options);
}

}  // namespace exactflow

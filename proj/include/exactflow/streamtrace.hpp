#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "exactflow/core.hpp"
#include "exactflow/odeint.hpp"

namespace exactflow {

enum class TraceEnd { reached_end, stagnation, domain_exit, singularity, non_finite, step_underflow };

std::string_view to_string(TraceEnd e);

struct StreamCurve {
    std::vector<double> parameter;
    std::vector<Point3> points;
    TraceEnd reason = TraceEnd::reached_end;
    std::string detail;
};

struct TraceOptions {
    bool arclength = true;
    StepPolicy policy = StepPolicy::fixed(1e-3);
    double stagnation_speed = 1e-12;
    // Optional domain; leaving it is a domain exit.
    std::function<bool(const Point3&)> inside;
};

using VelocityField = std::function<Vec3(const Point3&)>;

// dX/dt = velocity(X), or dX/ds = velocity/|velocity| with arclength.
StreamCurve trace_velocity(const VelocityField& velocity, const Point3& seed, Interval span,
                           const TraceOptions& options = {});

StreamCurve trace(const std::function<FlowState(const Point3&)>& field, const Point3& seed, Interval span,
                  const TraceOptions& options = {});

// Meridian-plane tracing of an axisymmetric field; points are (z, r, 0).
StreamCurve trace_axisym(const std::function<FlowState(double, double)>& field, double z0, double r0, Interval span,
                         const TraceOptions& options = {});

}  // namespace exactflow

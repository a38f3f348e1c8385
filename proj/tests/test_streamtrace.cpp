#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "exactflow/axisym.hpp"
#include "exactflow/streamtrace.hpp"
#include "exactflow/threed.hpp"
#include "exactflow/verify.hpp"

using namespace exactflow;

namespace {

FlowState uniform_x(const Point3&) { return {1.0, 0.0, 0.0, 1.0, 1.0}; }

AxisymParams pz_params() { return AxisymParams::closed_form(AxisymBranch::pz_independent, 0.5, 1.4, 2.0, -3.0, 0.4); }

// max deviation of z U(r)^{1/(m+1)} from its seed value
double pz_closure(const AxisymParams& p, const StreamCurve& c) {
    auto inv = [&](const Point3& q) { return q.x * std::pow(closed_form_pz(p, q.y).U, 1.0 / (p.m + 1.0)); };
    const double ref = inv(c.points.front());
    double worst = 0.0;
    for (const Point3& q : c.points) worst = std::max(worst, std::fabs(inv(q) - ref));
    return worst;
}

}  // namespace

TEST_CASE("uniform flow") {
    TraceOptions opt;
    const StreamCurve c = trace(uniform_x, {0, 0, 0}, {0.0, 1.0}, opt);
    CHECK(c.reason == TraceEnd::reached_end);
    CHECK(c.parameter.back() == 1.0);
    CHECK(c.points.back().x == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(c.points.back().y == 0.0);
    CHECK(c.points.back().z == 0.0);

    opt.arclength = false;
    auto fast = [](const Point3&) { return FlowState{2.0, 0.0, 0.0, 1.0, 1.0}; };
    CHECK(trace(fast, {0, 0, 0}, {0.0, 1.0}, opt).points.back().x == doctest::Approx(2.0));
}

TEST_CASE("axisymmetric tracing follows the closed-form streamline") {
    const AxisymParams p = pz_params();
    const AxisymField f = physical_field_axisym(p, [&](double r) { return closed_form_pz(p, r); });
    TraceOptions opt;
    opt.inside = [](const Point3& q) { return q.x > 0.1 && q.y > 0.3 && q.y < 3.0; };
    const StreamCurve c = trace_axisym(f, 1.0, 1.2, {0.0, 0.5}, opt);
    REQUIRE(c.reason == TraceEnd::reached_end);
    CHECK(pz_closure(p, c) <= 1e-6);

    std::vector<Point3> pts = c.points;
    auto f3 = [&](const Point3& q) { return f(q.x, q.y); };
    CHECK(invariants_along_curve(f3, pts, p.gamma).max() <= 1e-6);
}

TEST_CASE("halving the step reduces the closure error at fourth order") {
    const AxisymParams p = pz_params();
    const AxisymField f = physical_field_axisym(p, [&](double r) { return closed_form_pz(p, r); });
    auto closure = [&](double h) {
        TraceOptions opt;
        opt.policy = StepPolicy::fixed(h);
        return pz_closure(p, trace_axisym(f, 1.0, 1.2, {0.0, 0.8}, opt));
    };
    const double ratio = closure(0.1) / closure(0.05);
    CHECK(ratio > 12.0);
    CHECK(ratio < 20.0);
}

TEST_CASE("three-dimensional tracing matches the parametric family") {
    ThreeDParams p;
    p.m = 0.5;
    p.n = 0.3;
    p.gamma = 1.4;
    p.c1 = -2.0;
    p.c2 = -3.0;
    p.b = -3.0;
    const Field3 f = physical_field_3d(p, [&](double z) { return reconstruct_3d(p, z); });
    const Point3 seed{0.9, 1.1, 1.2};
    const StreamCurve c = trace(f, seed, {0.0, 0.3});
    REQUIRE(c.reason == TraceEnd::reached_end);
    double worst = 0.0;
    for (const Point3& q : c.points) {
        // align the parameter through x = a1 e^t
        const double t = std::log(q.x / seed.x);
        const Point3 want = streamlines_3d_parametric(p.gamma, seed.x, seed.y, seed.z + p.b, p.b, std::span(&t, 1))[0];
        worst = std::max({worst, std::fabs(q.y - want.y), std::fabs(q.z - want.z)});
    }
    CHECK(worst <= 1e-6);
    CHECK(c.points.back().x != doctest::Approx(seed.x));
    CHECK(invariants_along_curve(f, c.points, p.gamma).max() <= 1e-6);
}

TEST_CASE("termination reasons") {
    CHECK_THROWS_AS(trace([](const Point3&) { return FlowState{0, 0, 0, 1, 1}; }, {0, 0, 0}, {0.0, 1.0}),
                    SingularityError);

    auto slowing = [](const Point3& q) { return FlowState{std::max(0.0, 1.0 - q.x), 0.0, 0.0, 1.0, 1.0}; };
    const StreamCurve s = trace(slowing, {0.5, 0, 0}, {0.0, 1.0});
    CHECK(s.reason == TraceEnd::stagnation);
    CHECK(s.points.back().x == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(to_string(s.reason) == "stagnation");

    TraceOptions opt;
    opt.inside = [](const Point3& q) { return q.x < 0.5; };
    const StreamCurve d = trace(uniform_x, {0, 0, 0}, {0.0, 1.0}, opt);
    CHECK(d.reason == TraceEnd::domain_exit);
    CHECK(d.points.back().x <= 0.5);
    CHECK(d.points.back().x > 0.49);
    CHECK_THROWS_AS(trace(uniform_x, {1, 0, 0}, {0.0, 1.0}, opt), DomainError);

    auto blowup = [](const Point3& q) {
        if (q.x > 0.5) throw SingularityError("wall");
        return FlowState{1.0, 0.0, 0.0, 1.0, 1.0};
    };
    CHECK(trace(blowup, {0, 0, 0}, {0.0, 1.0}).reason == TraceEnd::singularity);

    auto nan_field = [](const Point3& q) { return Vec3{q.x > 0.5 ? NAN : 1.0, 0.0, 0.0}; };
    TraceOptions raw;
    raw.arclength = false;
    CHECK(trace_velocity(nan_field, {0, 0, 0}, {0.0, 1.0}, raw).reason == TraceEnd::non_finite);
}

TEST_CASE("exponential 3D branch streamlines leave the z = const planes") {
    ThreeDParams p;
    p.m = 0.5;
    p.n = 0.3;
    p.gamma = 3.0;
    p.c1 = -2.0;
    p.c2 = -3.0;
    p.b = 1.0;
    const Field3 f = physical_field_3d(p, [&](double z) { return reconstruct_3d(p, z); });
    const Point3 seed{0.9, 1.1, 0.4};
    const StreamCurve c = trace(f, seed, {0.0, 0.3});
    REQUIRE(c.reason == TraceEnd::reached_end);
    const Point3 end = c.points.back();
    CHECK(std::fabs(end.z - seed.z) > 0.1);
    CHECK(end.z == doctest::Approx(seed.z - std::log(end.x / seed.x) / p.A()).epsilon(1e-10));
}

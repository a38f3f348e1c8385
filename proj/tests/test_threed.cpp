#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "exactflow/odeint.hpp"
#include "exactflow/threed.hpp"
#include "exactflow/verify.hpp"

using namespace exactflow;

namespace {

ThreeDParams decaying() {
    ThreeDParams p;
    p.m = 0.5;
    p.n = 0.3;
    p.gamma = 1.4;
    p.c1 = -2.0;
    p.c2 = -3.0;
    p.b = -3.0;
    return p;
}

ThreeDParams gamma3() {
    ThreeDParams p = decaying();
    p.gamma = 3.0;
    p.c4 = 0.5;
    p.b = 1.0;
    return p;
}

void check_close(double got, double want, double rel) {
    CHECK(std::fabs(got - want) <= rel * std::max(1.0, std::fabs(want)));
}

}  // namespace

TEST_CASE("parameter validation") {
    ThreeDParams p = decaying();
    CHECK_NOTHROW(p.validate());
    p.m = -0.5;
    p.n = -0.5;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p = decaying();
    p.gamma = 1.0;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p = decaying();
    p.c1 = 0.0;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p = decaying();
    p.c2 = 3.0;
    CHECK_THROWS_AS(p.A(), DomainError);
}

TEST_CASE("auxiliary variables") {
    const AuxVars a = to_aux({1, 1, 1, 1, 1}, 0.4, 0.7);
    CHECK(a.S == 1.0);
    CHECK(a.R == 1.0);
    CHECK(a.T == 1.0);
    CHECK(a.X == 1.0);
    CHECK(a.Y == 1.0);

    const AuxVars b = to_aux({8, 1, 2, 1, 1}, 0.0, 0.0);
    CHECK(b.S == doctest::Approx(8.0));
    CHECK(b.R == doctest::Approx(1.0));
    CHECK(b.T == doctest::Approx(4.0));
    CHECK(b.X == doctest::Approx(1.0));
    CHECK(b.Y == doctest::Approx(0.125));

    const VelocityProfile v = from_aux({0, 0, 1, 1, 1}, 0.2, 0.9);
    CHECK(v.U == doctest::Approx(1.0));
    CHECK(v.V == doctest::Approx(1.0));
    CHECK(v.W == doctest::Approx(1.0));

    CHECK_THROWS_AS(from_aux({0, 0, 1, 1, 1}, -0.5, -0.5), DomainError);
}

TEST_CASE("auxiliary round trip") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> pos(0.1, 10.0), w(-10.0, 10.0), ex(-0.9, 2.0);
    for (int i = 0; i < 1000; ++i) {
        const double m = ex(rng), n = ex(rng);
        if (std::fabs(1 + m + n) < 0.2) continue;
        double W = w(rng);
        if (std::fabs(W) < 1e-3) W = 1.0;
        const ReducedState3D s{pos(rng), pos(rng), W, 1.0, 1.0};
        const VelocityProfile back = from_aux(to_aux(s, m, n), m, n);
        check_close(back.U, s.U, 1e-12);
        check_close(back.V, s.V, 1e-12);
        check_close(back.W, s.W, 1e-12);
    }
}

TEST_CASE("rhs structure") {
    const ThreeDParams p = decaying();
    const ReducedState3D zero_uv{0, 0, 1.5, 2, 0.7};
    const ReducedState3D d = rhs_3d(p, zero_uv, 1.0);
    CHECK(d.U == 0.0);
    CHECK(d.V == 0.0);
    const double Q = 2.0, P = 0.7;
    const ReducedState3D sonic{0.3, 0.2, std::sqrt(p.gamma * P / Q), Q, P};
    CHECK_THROWS_AS(rhs_3d(p, sonic, 1.0), SingularSystemError);
    CHECK_THROWS_AS(rhs_3d(p, {1, 1, 0, 1, 1}, 1.0), SingularityError);
}

TEST_CASE("X equation closed-form roots") {
    ThreeDParams p = decaying();
    const double A = p.A();
    CHECK(A == doctest::Approx(std::pow(2.0 * p.a(), -1.0 / (p.gamma + 1.0))));
    for (double X : {0.2, 1.0, 3.5}) {
        CHECK(x_equation_rhs(p, X) == doctest::Approx(-A * std::pow(X, 2.0 * (p.gamma - 1.0) / (p.gamma + 1.0))));
        CHECK(std::fabs(x_equation_residual(p, X, x_equation_rhs(p, X))) < 1e-10);
    }
    ThreeDParams q = gamma3();
    q.c4 = 0.0;
    for (double X : {0.2, 1.0, 3.5}) CHECK(x_equation_rhs(q, X) == doctest::Approx(-q.A() * X));
    q.c4 = 0.5;
    for (double X : {0.2, 1.0}) CHECK(x_equation_rhs(q, X) == doctest::Approx(-q.A() * std::sqrt(X * (X + 0.5))));
    CHECK_THROWS_AS(x_equation_rhs(p, 1.0, XBranch::growing), BracketError);
}

TEST_CASE("X equation with nonzero constant") {
    ThreeDParams p = decaying();
    p.c3 = 1.7;
    for (double X : {0.3, 1.0, 2.0}) {
        const double dX = x_equation_rhs(p, X, XBranch::decaying);
        CHECK(dX < 0.0);
        CHECK(std::fabs(x_equation_residual(p, X, dX)) < 1e-10);
    }
    p.c3 = -1.0;
    CHECK_THROWS_AS(x_equation_rhs(p, 1.0, XBranch::growing), BracketError);
}

TEST_CASE("closed-form X") {
    ThreeDParams p = gamma3();
    p.c4 = 0.0;
    for (double z : {0.0, 0.3, 1.0}) CHECK(closed_form_X(p, z) == doctest::Approx(std::exp(-p.A() * z + p.b) / 2));

    ThreeDParams q = decaying();
    q.gamma = 2.0;
    q.c1 = -1.0;
    q.c2 = -0.25;  // a = 0.5, A = 1
    q.b = 0.0;
    CHECK(q.A() == doctest::Approx(1.0));
    CHECK(closed_form_X(q, -0.6) == doctest::Approx(std::pow(0.2, 3.0)));
    CHECK_THROWS_AS(closed_form_X(q, 0.6), DomainError);

    for (const ThreeDParams& r : {decaying(), gamma3()}) {
        for (double z : {0.1, 0.3}) {
            const double h = 1e-5;
            const double fd = (closed_form_X(r, z + h) - closed_form_X(r, z - h)) / (2 * h);
            CHECK(fd == doctest::Approx(x_equation_rhs(r, closed_form_X(r, z))).epsilon(1e-8));
            const XJet j = closed_form_X_jet(r, z);
            CHECK(std::fabs(x_equation_residual(r, j.X, j.dX)) < 1e-10);
        }
    }
    ThreeDParams bad = decaying();
    bad.c3 = 1.0;
    CHECK_THROWS_AS(closed_form_X(bad, 0.0), ConfigError);
}

TEST_CASE("reconstruction against high-precision values") {
    const ThreeDParams p = decaying();
    const XJet x = closed_form_X_jet(p, 1.3);
    CHECK(x.X == doctest::Approx(0.27751929371929193763).epsilon(1e-13));
    CHECK(x.dX == doctest::Approx(-0.24486996504643406262).epsilon(1e-13));
    const ReducedState3D s = reconstruct_3d(p, 1.3);
    CHECK(s.U == doctest::Approx(10.047829874805913437).epsilon(1e-12));
    CHECK(s.V == doctest::Approx(10.047829874805913437).epsilon(1e-12));
    CHECK(s.W == doctest::Approx(-11.387540524780035229).epsilon(1e-12));
    CHECK(s.Q == doctest::Approx(0.8178021392693276672).epsilon(1e-12));
    CHECK(s.P == doctest::Approx(-15.149910712098179269).epsilon(1e-12));

    const XJet g = closed_form_X_jet(gamma3(), 0.2);
    CHECK(g.X == doctest::Approx(0.94794221816332416718).epsilon(1e-13));
    CHECK(g.dX == doctest::Approx(-0.80438399359425177074).epsilon(1e-13));
}

TEST_CASE("reconstructed states carry the integrals and solve the reduced system") {
    for (const ThreeDParams& p : {decaying(), gamma3()}) {
        for (double z : {0.0, 0.3, 0.5}) {
            const ReducedJet3D jet = reconstruct_3d_jet(p, z);
            const FirstIntegrals fi = first_integrals_3d(p, jet.value);
            CHECK(fi.c1 == doctest::Approx(p.c1).epsilon(1e-10));
            CHECK(fi.c2 == doctest::Approx(p.c2).epsilon(1e-10));
            CHECK(std::fabs(fi.c3) < 1e-10 * std::max(1.0, fi.c3_scale));

            const AuxVars aux = to_aux(jet.value, p.m, p.n);
            CHECK(jet.value.W == doctest::Approx(std::pow(aux.R, p.n + 1) * std::pow(aux.S, p.m + 1) / aux.T));

            const ReducedState3D d = rhs_3d(p, jet.value, z);
            check_close(d.U, jet.derivative.U, 1e-9);
            check_close(d.V, jet.derivative.V, 1e-9);
            check_close(d.W, jet.derivative.W, 1e-9);
            check_close(d.Q, jet.derivative.Q, 1e-9);
            check_close(d.P, jet.derivative.P, 1e-9);
        }
    }
}

TEST_CASE("definition of W differs from the displayed form only by sign at b = 0") {
    ThreeDParams p = decaying();
    p.b = 0.0;
    const double g = p.gamma, m = p.m, n = p.n, A = p.A();
    const double z = -1.5;
    const double B = A * (g - 3) * z / (g + 1);
    const double displayed = ((g - 3) * z / (g + 1)) * std::pow(B, (g + 1) * (m + n + 1) / (g - 3));
    const double W = reconstruct_3d(p, z).W;
    CHECK(std::fabs(W) == doctest::Approx(std::fabs(displayed)).epsilon(1e-12));
    CHECK(W == doctest::Approx(-displayed).epsilon(1e-12));
}

TEST_CASE("integral scaling in Q") {
    const ThreeDParams p = decaying();
    ReducedState3D s = reconstruct_3d(p, 0.4);
    const double c1 = first_integrals_3d(p, s).c1;
    s.Q *= 2.5;
    CHECK(first_integrals_3d(p, s).c1 == doctest::Approx(2.5 * c1));
}

TEST_CASE("integrated trajectories conserve the integrals") {
    const ThreeDParams p = decaying();
    const ReducedState3D s0{1.0, 1.2, 2.0, 1.0, 1.0};
    auto rhs = [&](double z, const StateVec<5>& y) { return rhs_3d(p, ReducedState3D::from_array(y), z).to_array(); };
    InvariantMonitor<5> mon;
    mon.add("c1", [&](const StateVec<5>& y, double) { return first_integrals_3d(p, ReducedState3D::from_array(y)).c1; });
    mon.add("c2", [&](const StateVec<5>& y, double) { return first_integrals_3d(p, ReducedState3D::from_array(y)).c2; });
    mon.add("c3", [&](const StateVec<5>& y, double) { return first_integrals_3d(p, ReducedState3D::from_array(y)).c3; });
    const auto traj = integrate<5>(rhs, s0.to_array(), {0.0, 1.0}, StepPolicy::fixed(1e-3), &mon);
    REQUIRE(traj.completed());
    CHECK(mon.max_drift() < 1e-8);
}

TEST_CASE("literal energy equation breaks the second integral") {
    const ThreeDParams p = decaying();
    const ReducedState3D s0{1.0, 1.2, 2.0, 1.0, 1.0};
    auto c2_drift = [&](E5Form form) {
        auto rhs = [&](double z, const StateVec<5>& y) {
            return rhs_3d(p, ReducedState3D::from_array(y), z, form).to_array();
        };
        InvariantMonitor<5> mon;
        mon.add("c2", [&](const StateVec<5>& y, double) { return first_integrals_3d(p, ReducedState3D::from_array(y)).c2; });
        integrate<5>(rhs, s0.to_array(), {0.0, 1.0}, StepPolicy::fixed(1e-3), &mon);
        return mon.drift("c2");
    };
    CHECK(c2_drift(E5Form::corrected) < 1e-8);
    CHECK(c2_drift(E5Form::literal) > 1e-3);
}

TEST_CASE("parametric streamlines") {
    const std::vector<double> ts = {-1.0, 0.0, 0.5, 2.0};
    for (const Point3& p : streamlines_3d_parametric(3.0, 1.0, 2.0, 0.7, 0.0, ts)) CHECK(p.z == doctest::Approx(0.7));
    const auto c = streamlines_3d_parametric(1.4, 1.3, 1.3, 0.5, 2.0, ts);
    for (std::size_t i = 0; i < ts.size(); ++i) {
        CHECK(c[i].x == c[i].y);
        CHECK(c[i].x == doctest::Approx(1.3 * std::exp(ts[i])));
        CHECK(c[i].z == doctest::Approx(-2.0 + 0.5 * std::exp(-ts[i] * (1.4 - 3.0) / (1.4 + 1.0))));
    }
}

TEST_CASE("physical field assembly") {
    ThreeDParams p = decaying();
    p.m = 0.0;
    p.n = 0.0;
    const ReducedProfile3D prof = [](double z) { return ReducedState3D{1 + z, 2 + z, 3 + z, 4 + z, 5 + z}; };
    const Field3 f = physical_field_3d(p, prof);
    const FlowState s = f({0.5, 2.0, 1.0});
    CHECK(s.u() == doctest::Approx(0.5 * 2.0));
    CHECK(s.v() == doctest::Approx(2.0 * 3.0));
    CHECK(s.w() == doctest::Approx(4.0));
    CHECK(s.rho() == doctest::Approx(5.0));
    CHECK(s.p() == doctest::Approx(6.0));

    const ThreeDParams q = decaying();
    const Field3 g = physical_field_3d(q, prof);
    CHECK(g({1.4, 0.8, 0.2}).u() / g({0.7, 0.8, 0.2}).u() == doctest::Approx(std::pow(2.0, q.n + 1.0)));
    CHECK(g({0.7, 1.6, 0.2}).v() / g({0.7, 0.8, 0.2}).v() == doctest::Approx(std::pow(2.0, q.m + 1.0)));
    CHECK_THROWS_AS(g({-1.0, 0.8, 0.2}), DomainError);
}

TEST_CASE("assembled fields satisfy the Euler equations") {
    for (const ThreeDParams& p : {decaying(), gamma3()}) {
        const Field3 f = physical_field_3d(p, [&](double z) { return reconstruct_3d(p, z); });
        const Point3 pt{0.9, 1.1, 0.3};
        const auto conv = convergence_order([&](double h) { return euler_residual_3d(f, pt, h, p.gamma).max_abs(); },
                                            kDefaultSpacings);
        REQUIRE_FALSE(conv.saturated);
        CHECK(*conv.slope >= 1.8);
        CHECK(*conv.slope <= 2.2);
        CHECK(euler_residual_3d(f, pt, 1e-3, p.gamma).max_normalized() < 1e-5);
    }
}

#include <doctest.h>

#include <cmath>
#include <random>

#include "exactflow/chaplygin.hpp"
#include "exactflow/verify.hpp"

using namespace exactflow;

namespace {

PotentialSampler value_only(std::function<double(const Point3&)> f) { return {std::move(f), {}}; }

PotentialSampler linear_rational(std::array<double, 4> k, std::array<double, 4> n) {
    RationalPotential rp;
    rp.k = k;
    rp.n = n;
    return PotentialSampler::rational(rp);
}

}  // namespace

TEST_CASE("scalar polynomial derivative") {
    const ScalarFn p = ScalarFn::polynomial({1.0, -2.0, 3.0});
    CHECK(p(2.0) == 9.0);
    CHECK(p.derivative(2.0) == 10.0);
    ScalarFn s{[](double t) { return std::sin(t); }, {}};
    CHECK(s.derivative(0.3) == doctest::Approx(std::cos(0.3)).epsilon(1e-9));
}

TEST_CASE("implicit potential solve") {
    const ChaplyginFamily lin(ScalarFn::identity(), ScalarFn::constant(1), ScalarFn::constant(0),
                              ScalarFn::constant(-1));
    CHECK(solve_potential_implicit(lin, {2, 0, 0}, {-10, 10}) == doctest::Approx(0.5).epsilon(1e-14));

    const ChaplyginFamily ident(ScalarFn::constant(1), ScalarFn::constant(0), ScalarFn::constant(0),
                                ScalarFn::polynomial({0, -1}));
    CHECK(solve_potential_implicit(ident, {3, 0, 0}, {-10, 10}) == doctest::Approx(3.0).epsilon(1e-14));

    const ChaplyginFamily quad(ScalarFn::polynomial({0, 0, 1}), ScalarFn::constant(1), ScalarFn::constant(1),
                               ScalarFn::constant(0));
    const double phi = solve_potential_implicit(quad, {1, 1, -2}, {0.5, 2});
    CHECK(phi == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(phi * phi * 1 + 1 - 2 == doctest::Approx(0.0));

    CHECK_THROWS_AS(solve_potential_implicit(lin, {2, 0, 0}, {1, 2}), BracketError);
}

TEST_CASE("vanishing plane normal") {
    const ChaplyginFamily fam(ScalarFn::polynomial({0, 1}), ScalarFn::constant(0), ScalarFn::constant(0),
                              ScalarFn::polynomial({0, -1}));
    CHECK_THROWS_AS(fam.normal(0.0), DomainError);
    CHECK(fam.normal(2.0) == Vec3{2, 0, 0});
}

TEST_CASE("rational potential values") {
    RationalPotential rp;
    rp.k = {1, 0, 0, 0};
    rp.n = {0, 0, 0, 1};
    CHECK(rational_potential_value(rp, {3, 5, 7}) == 3.0);

    rp.k = {0, -1, 0, 1};
    rp.n = {1, 0, 0, 0};
    CHECK(rational_potential_value(rp, {2, 0, 0}) == doctest::Approx(0.5));
    // same potential as the implicit family phi x + y - 1 = 0
    const ChaplyginFamily lin(ScalarFn::identity(), ScalarFn::constant(1), ScalarFn::constant(0),
                              ScalarFn::constant(-1));
    for (Point3 p : {Point3{2, 0, 0}, Point3{1.5, 0.3, -2}, Point3{-3, 2, 1}}) {
        CHECK(rational_potential_value(rp, p) ==
              doctest::Approx(solve_potential_implicit(lin, p, {-50, 50})).epsilon(1e-13));
    }

    rp.k = {1, 0, 0, 0};
    rp.n = {1, 1, 0, 0};
    rp.f = ScalarFn::polynomial({0, 0, 1});
    CHECK(rational_potential_value(rp, {1, 1, 0}) == doctest::Approx(0.25));

    CHECK_THROWS_AS(rational_potential_value(rp, {1, -1, 0}), SingularityError);
    RationalPotential bad;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("gradient") {
    const auto phi_x = value_only([](const Point3& p) { return p.x; });
    const Vec3 gx = gradient(phi_x, {0.3, -2, 5}, 1e-3);
    CHECK(gx.x == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(gx.y == 0.0);
    CHECK(gx.z == 0.0);

    const auto lin = value_only([](const Point3& p) { return p.x + 2 * p.y + 3 * p.z; });
    const Vec3 g = gradient(lin, {0.7, 1.1, -0.4}, 1e-3);
    CHECK(g.x == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(g.y == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(g.z == doctest::Approx(3.0).epsilon(1e-12));

    const auto q = value_only([](const Point3& p) { return (1 - p.y) / p.x; });
    const Vec3 gq = gradient(q, {2, 0, 0}, 1e-4);
    CHECK(std::fabs(gq.x + 0.25) < 1e-7);
    CHECK(std::fabs(gq.y + 0.5) < 1e-7);
    CHECK(std::fabs(gq.z) < 1e-7);

    // analytic gradient is returned as is
    const auto rq = linear_rational({0, -1, 0, 1}, {1, 0, 0, 0});
    CHECK(gradient(rq, {2, 0, 0}, 0.5) == Vec3{-0.25, -0.5, 0});
}

TEST_CASE("stencil touching a singular point") {
    const auto rq = linear_rational({0, -1, 0, 1}, {1, 0, 0, 0});
    CHECK_THROWS_AS(hessian(rq, {1e-3, 0, 0}, 1e-3), StencilError);
    const auto vq = value_only([&](const Point3& p) { return rq.value(p); });
    CHECK_THROWS_AS(gradient(vq, {1e-3, 0, 0}, 1e-3), StencilError);
}

TEST_CASE("implicit gradient matches finite differences of the solved potential") {
    const ChaplyginFamily fam(ScalarFn::polynomial({0.2, 0.05}), ScalarFn::constant(0.1),
                              ScalarFn::polynomial({-0.1, 0, 0.02}), ScalarFn::polynomial({0, -1}));
    const auto exact = PotentialSampler::implicit(fam, {-5, 5});
    const auto numeric = value_only(exact.value);
    const Point3 p{0.9, 1.2, 0.7};
    const Vec3 ge = gradient(exact, p, 1e-4);
    const Vec3 gn = gradient(numeric, p, 1e-4);
    for (int i = 0; i < 3; ++i) CHECK(ge[i] == doctest::Approx(gn[i]).epsilon(1e-8));
}

TEST_CASE("chaplygin state") {
    const FlowState s1 = chaplygin_state({1, 0, 0}, GasLaw::chaplygin(1, 0));
    CHECK(s1.velocity() == Vec3{1, 0, 0});
    CHECK(s1.rho() == doctest::Approx(1.0));
    CHECK(s1.p() == doctest::Approx(-1.0));

    const FlowState s2 = chaplygin_state({0, 2, 0}, GasLaw::chaplygin(4, 2));
    CHECK(s2.rho() == doctest::Approx(1.0));
    CHECK(s2.p() == doctest::Approx(-2.0));

    const FlowState s3 = chaplygin_state({1, 1, 1}, GasLaw::chaplygin(1, 1));
    CHECK(s3.rho() == doctest::Approx(1.0 / std::sqrt(3.0)));
    CHECK(s3.p() == doctest::Approx(1.0 - std::sqrt(3.0)));

    CHECK_THROWS_AS(chaplygin_state({0, 0, 0}, GasLaw::chaplygin(1, 0)), SingularityError);
    CHECK_THROWS_AS(chaplygin_state({1, 0, 0}, GasLaw::polytropic(1.4)), DomainError);
}

TEST_CASE("sonic identity holds for any gradient") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-10, 10), a(0.1, 5);
    for (int i = 0; i < 200; ++i) {
        const GasLaw law = GasLaw::chaplygin(a(rng), u(rng));
        const FlowState s = chaplygin_state({u(rng), u(rng), u(rng)}, law);
        const double c2 = sound_speed_squared(law, s);
        CHECK(std::fabs(s.speed_squared() - c2) <= 1e-12 * c2);
    }
}

TEST_CASE("potential residual of linear potentials vanishes") {
    const auto lin = value_only([](const Point3& p) { return 0.3 * p.x - 1.7 * p.y + 2.2 * p.z + 4; });
    CHECK(std::fabs(potential_residual(lin, {0.4, -0.3, 1.1}, 0.1)) < 1e-11);
    const auto phi_x = linear_rational({1, 0, 0, 0}, {0, 0, 0, 1});
    CHECK(potential_residual(phi_x, {0.4, -0.3, 1.1}, 1e-3) == 0.0);
}

TEST_CASE("potential residual converges at second order on an exact solution") {
    const auto rq = linear_rational({0, -1, 0, 1}, {1, 0, 0, 0});
    const auto vq = value_only(rq.value);
    const double coarse[] = {4e-2, 2e-2, 1e-2};
    const auto vconv = convergence_order([&](double h) { return potential_residual(vq, {2, 0.3, 0.1}, h); }, coarse);
    REQUIRE_FALSE(vconv.saturated);
    CHECK(*vconv.slope == doctest::Approx(2.0).epsilon(0.05));
    const auto axis_conv = convergence_order([&](double h) { return potential_residual(rq, {2, 0, 0}, h); },
                                             kDefaultSpacings);
    if (!axis_conv.saturated) CHECK(*axis_conv.slope == doctest::Approx(2.0).epsilon(0.1));
    const auto conv = convergence_order([&](double h) { return potential_residual(rq, {2, 0.3, 0.1}, h); },
                                        kDefaultSpacings);
    REQUIRE_FALSE(conv.saturated);
    CHECK(*conv.slope == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("potential residual negative control") {
    // expansion: with phi = |x|^2, residual = 4 |grad phi|^2 = 16 (x^2 + y^2 + z^2)
    const auto sq = value_only([](const Point3& p) { return dot(p, p); });
    CHECK(potential_residual(sq, {1, 1, 1}, 1e-3) == doctest::Approx(48.0).epsilon(1e-9));
    CHECK(potential_residual(sq, {0.5, -1, 2}, 1e-3) == doctest::Approx(16.0 * 5.25).epsilon(1e-9));
    const auto conv = convergence_order([&](double h) { return potential_residual(sq, {1, 1, 1}, h); },
                                        kDefaultSpacings);
    CHECK(std::fabs(*conv.slope) < 0.2);
}

TEST_CASE("characteristic residual") {
    const auto px = value_only([](const Point3& p) { return p.x; });
    const auto py = value_only([](const Point3& p) { return p.y; });
    const auto p3x = value_only([](const Point3& p) { return 3 * p.x; });
    const auto rq = linear_rational({0, -1, 0, 1}, {1, 0, 0, 0});
    CHECK(characteristic_residual(rq, rq, {2, 0.5, 1}, 1e-3) == 0.0);
    CHECK(characteristic_residual(px, py, {0.1, 0.2, 0.3}, 1e-3) == doctest::Approx(1.0));
    CHECK(characteristic_residual(px, p3x, {0.1, 0.2, 0.3}, 1e-3) == doctest::Approx(0.0));
}

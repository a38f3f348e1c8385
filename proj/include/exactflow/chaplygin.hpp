#pragma once

#include <array>
#include <functional>
#include <optional>
#include <vector>

#include "exactflow/core.hpp"
#include "exactflow/roots.hpp"

namespace exactflow {

// Smooth scalar function of one variable with an optional analytic
// derivative. Without one, derivative() falls back to a central difference.
struct ScalarFn {
    std::function<double(double)> value;
    std::function<double(double)> slope;  // may be empty

    double operator()(double t) const { return value(t); }
    double derivative(double t) const;
    bool has_derivative() const { return static_cast<bool>(slope); }

    // sum_i coeffs[i] * t^i, with exact derivative.
    static ScalarFn polynomial(std::vector<double> coeffs);
    static ScalarFn constant(double c) { return polynomial({c}); }
    static ScalarFn identity() { return polynomial({0.0, 1.0}); }
};

// Implicit potential a(phi) x + b(phi) y + c(phi) z + d(phi) = 0.
class ChaplyginFamily {
public:
    ChaplyginFamily(ScalarFn a, ScalarFn b, ScalarFn c, ScalarFn d)
        : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), d_(std::move(d)) {}

    // Left-hand side of the implicit relation at potential value phi.
    double relation(double phi, const Point3& pt) const;
    // Partial derivative of relation() with respect to phi.
    double relation_slope(double phi, const Point3& pt) const;
    // Plane normal (a, b, c) at phi; throws DomainError when it vanishes.
    Vec3 normal(double phi) const;
    double offset(double phi) const { return d_(phi); }

private:
    ScalarFn a_, b_, c_, d_;
};

double solve_potential_implicit(const ChaplyginFamily& family, const Point3& pt, Interval bracket);

// Exact gradient of the implicitly defined potential, by implicit
// differentiation: grad phi = -(a, b, c) / (a' x + b' y + c' z + d').
Vec3 implicit_gradient(const ChaplyginFamily& family, const Point3& pt, double phi);

// phi = f((k1 x + k2 y + k3 z + k4) / (n1 x + n2 y + n3 z + n4)).
struct RationalPotential {
    std::array<double, 4> k{};
    std::array<double, 4> n{};
    ScalarFn f = ScalarFn::identity();

    void validate() const;
};

double rational_potential_value(const RationalPotential& rp, const Point3& pt);
Vec3 rational_potential_gradient(const RationalPotential& rp, const Point3& pt);

// A potential field phi(pt), optionally with its exact gradient.
struct PotentialSampler {
    std::function<double(const Point3&)> value;
    std::function<Vec3(const Point3&)> exact_gradient;  // may be empty

    bool has_analytic_gradient() const { return static_cast<bool>(exact_gradient); }

    static PotentialSampler implicit(ChaplyginFamily family, Interval bracket);
    static PotentialSampler rational(RationalPotential rp);
};

struct Hessian {
    double xx = 0, yy = 0, zz = 0, xy = 0, xz = 0, yz = 0;
};

// Second-order central-difference gradient, or the exact gradient when the
// sampler provides one. Throws StencilError when the stencil touches a point
// where the sampler fails.
Vec3 gradient(const PotentialSampler& sampler, const Point3& pt, double h);

// Central-difference Hessian; differentiates the exact gradient when
// available, otherwise uses the 19-point second-difference stencil on phi.
Hessian hessian(const PotentialSampler& sampler, const Point3& pt, double h);

struct PotentialResidual {
    double residual = 0.0;  // signed left-hand side of the potential equation
    double scale = 0.0;     // largest magnitude among its six constituent terms

    double normalized() const { return scale > 0.0 ? std::fabs(residual) / scale : std::fabs(residual); }
};

// (phi_y^2 + phi_z^2) phi_xx + (phi_x^2 + phi_z^2) phi_yy + (phi_x^2 + phi_y^2) phi_zz
//   - 2 (phi_x phi_y phi_xy + phi_x phi_z phi_xz + phi_y phi_z phi_yz)
PotentialResidual potential_residual_terms(const PotentialSampler& sampler, const Point3& pt, double h);
double potential_residual(const PotentialSampler& sampler, const Point3& pt, double h);

// Sum of squared components of grad phi x grad Phi; zero iff the gradients are
// parallel.
double characteristic_residual(const PotentialSampler& phi, const PotentialSampler& cap_phi,
                               const Point3& pt, double h);

// Velocity = grad phi, rho = sqrt(a) / |grad phi|, p = -a / rho + b.
FlowState chaplygin_state(const Vec3& grad_phi, const GasLaw& law);

}  // namespace exactflow

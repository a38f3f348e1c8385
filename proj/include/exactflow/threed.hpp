#pragma once

#include <array>
#include <functional>
#include <span>
#include <vector>

#include "exactflow/axisym.hpp"
#include "exactflow/core.hpp"

namespace exactflow {

// Parameters of the three-dimensional reduction
//   u = x^{n+1} y^m U(z), v = x^n y^{m+1} V(z), w = x^n y^m W(z),
//   rho = x^{-2n} y^{-2m} Q(z), p = P(z).
// Note the pairing: x carries n, y carries m.
struct ThreeDParams {
    double m = 0.0;
    double n = 0.0;
    double gamma = 1.4;
    double c1 = -1.0;
    double c2 = -1.0;
    double c3 = 0.0;  // value of the third integral (kinetic form)
    double c4 = 0.0;  // Y - X
    double b = 0.0;   // integration constant of the closed-form X

    void validate() const;
    // Coefficient of the X-equation, c2 gamma / (c1 (gamma - 1)).
    double a() const { return c2 * gamma / (c1 * (gamma - 1.0)); }
    // (2a)^{-1/(gamma+1)}; requires a > 0.
    double A() const;
};

enum class E5Form {
    corrected,  // W P' + gamma P ((n+1) U + (m+1) V + W') = 0
    literal,    // the P-free form; for regression checks only
};

struct ReducedState3D {
    double U = 0.0;
    double V = 0.0;
    double W = 0.0;
    double Q = 0.0;
    double P = 0.0;

    std::array<double, 5> to_array() const { return {U, V, W, Q, P}; }
    static ReducedState3D from_array(const std::array<double, 5>& a) { return {a[0], a[1], a[2], a[3], a[4]}; }
};

struct ReducedJet3D {
    ReducedState3D value;
    ReducedState3D derivative;
};

struct AuxVars {
    double S = 0.0;
    double R = 0.0;
    double T = 0.0;
    double X = 0.0;
    double Y = 0.0;
};

struct VelocityProfile {
    double U = 0.0;
    double V = 0.0;
    double W = 0.0;
};

// U' and V' from E2, E3; (Q', W', P') from the 3x3 system of E1, E4, E5 with
// determinant W (Q W^2 - gamma P).
ReducedState3D rhs_3d(const ThreeDParams& params, const ReducedState3D& s, double z,
                      E5Form e5 = E5Form::corrected);

// S = U^{1/(1+n+m)}, R = V^{1/(1+n+m)}, T = R^{n+1} S^{m+1} / W,
// X = S^n R^{-n-1}, Y = R^m S^{-m-1}.
AuxVars to_aux(const ReducedState3D& s, double m, double n);
VelocityProfile from_aux(const AuxVars& aux, double m, double n);

// c1 = Q W R^{2m-1-n} S^{2n-1-m}, c2 = P |W S^{-1-m} R^{-1-n}|^gamma,
// c3 = W^2 R^{-2m} S^{-2n} + 2 c2 gamma / (c1 (gamma-1)) sgn(T) |T|^{gamma-1}.
FirstIntegrals first_integrals_3d(const ThreeDParams& params, const ReducedState3D& s);

// 1/(2 X'^2) + a sgn(T)|T|^{gamma-1} - c3/2 with T = X'/(X (X + c4)).
double x_equation_residual(const ThreeDParams& params, double X, double dX);

enum class XBranch { decaying, growing };

// Real root X' of the X-equation at X. For c3 = 0 the closed-form root
// X' = -A (X (X + c4))^{(gamma-1)/(gamma+1)} (decaying branch).
double x_equation_rhs(const ThreeDParams& params, double X, XBranch branch = XBranch::decaying);

struct XJet {
    double X = 0.0;
    double dX = 0.0;
    double d2X = 0.0;
};

// gamma = 3: X = (2 e^{-Az+b} - c4)^2 / (8 e^{-Az+b}).
// gamma != 3 (c4 = 0): X = (A (gamma-3)(z+b)/(gamma+1))^{-(gamma+1)/(gamma-3)}.
XJet closed_form_X_jet(const ThreeDParams& params, double z);
double closed_form_X(const ThreeDParams& params, double z);

// Full reduced state from X and X' through Y = X + c4, T = X'/(XY), the
// inverse of to_aux and the first integrals c1, c2.
ReducedState3D reconstruct_from_x(const ThreeDParams& params, double X, double dX);
ReducedJet3D reconstruct_from_x_jet(const ThreeDParams& params, const XJet& x);

ReducedState3D reconstruct_3d(const ThreeDParams& params, double z);
ReducedJet3D reconstruct_3d_jet(const ThreeDParams& params, double z);

// Streamlines of the gamma != 3 closed form: x = a1 e^t, y = a2 e^t,
// z = -b + a3 e^{-t (gamma-3)/(gamma+1)}.
std::vector<Point3> streamlines_3d_parametric(double gamma, double a1, double a2, double a3, double b,
                                              std::span<const double> ts);

using ReducedProfile3D = std::function<ReducedState3D(double)>;
using Field3 = std::function<FlowState(const Point3&)>;

Field3 physical_field_3d(const ThreeDParams& params, ReducedProfile3D reduced);

}  // namespace exactflow

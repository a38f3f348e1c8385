#pragma once

#include <array>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "exactflow/core.hpp"

namespace exactflow {

// Which pressure derivative vanishes. p_z-independent: u = z^{m+1} U(r),
// v = z^m V(r), rho = z^{-2m} Q(r), p = P(r). p_r-independent:
// u = r^m U(z), v = r^{m+1} V(z), rho = r^{-2m} Q(z), p = P(z).
enum class AxisymBranch { pz_independent, pr_independent };

struct AxisymParams {
    AxisymBranch branch = AxisymBranch::pz_independent;
    double m = 0.0;
    double gamma = 1.4;
    double c1 = 1.0;
    double c2 = 1.0;
    double c3 = 0.0;
    // Closed-form constants: a is solved from (m, gamma, c1, c2), b is free.
    double a = std::numeric_limits<double>::quiet_NaN();
    double b = 0.0;

    void validate() const;
    // c2 gamma / (c1 (gamma - 1)), the coefficient of the enthalpy term.
    double enthalpy_coefficient() const { return c2 * gamma / (c1 * (gamma - 1.0)); }

    // Parameters of the c3 = 0 closed-form branch with `a` solved by root
    // finding on the ansatz-substituted reduced equation. Requires
    // c1 c2 < 0: with c3 = 0 the enthalpy term must cancel the kinetic one.
    static AxisymParams closed_form(AxisymBranch branch, double m, double gamma, double c1, double c2, double b);
};

struct ReducedStateRZ {
    double U = 0.0;
    double V = 0.0;
    double Q = 0.0;
    double P = 0.0;

    std::array<double, 4> to_array() const { return {U, V, Q, P}; }
    static ReducedStateRZ from_array(const std::array<double, 4>& a) { return {a[0], a[1], a[2], a[3]}; }
};

struct ReducedJetRZ {
    ReducedStateRZ value;
    ReducedStateRZ derivative;
};

struct FirstIntegrals {
    double c1 = 0.0;
    double c2 = 0.0;
    double c3 = 0.0;
    // Magnitude of the kinetic term of c3; a drift scale when c3 vanishes.
    double c3_scale = 0.0;
};

// d/dr of (U, V, Q, P) for the p_z-independent reduction. (V', P') come from
// the 2x2 system of the momentum and energy equations, whose determinant
// V^2 - gamma P / Q vanishes at the sonic degeneracy.
ReducedStateRZ rhs_pz_branch(const AxisymParams& params, const ReducedStateRZ& s, double r);

// d/dz of (U, V, Q, P) for the p_r-independent reduction; determinant
// Q U^2 - gamma P.
ReducedStateRZ rhs_pr_branch(const AxisymParams& params, const ReducedStateRZ& s, double z);

ReducedStateRZ rhs_axisym(const AxisymParams& params, const ReducedStateRZ& s, double coord);

// U = (a r^{2g/(1+g)} + b)^{-(m+1)(1+g)/2} with V, Q, P from the relation
// V = -(m+1) U^2 / U' and the first integrals; derivative is analytic.
ReducedJetRZ closed_form_pz_jet(const AxisymParams& params, double r);
ReducedStateRZ closed_form_pz(const AxisymParams& params, double r);

// gamma = 3: V = b e^{kz}; otherwise V = (a z + b)^{(m+1)(g+1)/(g-3)}.
// U = -(m+1) V^2 / V' and Q, P from the first integrals.
ReducedJetRZ closed_form_pr_jet(const AxisymParams& params, double z);
ReducedStateRZ closed_form_pr(const AxisymParams& params, double z);

ReducedJetRZ closed_form_axisym_jet(const AxisymParams& params, double coord);

// k = -(m+1) |c1 / (3 c2)|^{1/4}, the rate of the gamma = 3 exponential.
double pr_exponential_rate(double m, double c1, double c2);
// (m+1)(g+1)/(g-3), exponent of the gamma != 3 power law.
double pr_power_exponent(double m, double gamma);

FirstIntegrals first_integrals_pz(const AxisymParams& params, const ReducedStateRZ& s, double r);
FirstIntegrals first_integrals_pr(const AxisymParams& params, const ReducedStateRZ& s, double z);
FirstIntegrals first_integrals_axisym(const AxisymParams& params, const ReducedStateRZ& s, double coord);

// Left side of the scalar equation for U(r) obtained from the third integral:
// (1+m)^2/2 U^{(2m+4)/(m+1)} / U'^2 + K (-U'/((m+1) U r))^{g-1}.
double reduced_equation_pz(const AxisymParams& params, double U, double dU, double r);

// Left side of the scalar equation for V(z):
// (m+1)^2/2 (V^{(m+2)/(m+1)} / V')^2 + K (-V^{-m/(m+1)} V' / (m+1))^{g-1}.
double reduced_equation_pr(const AxisymParams& params, double V, double dV);

struct RZPoint {
    double z = 0.0;
    double r = 0.0;
};

// Closed-form streamlines: z = c U(r)^{-1/(m+1)} on the p_z branch (samples
// are r values), r = c V(z)^{-1/(m+1)} on the p_r branch (samples are z).
// `reduced` is U(r) or V(z) respectively.
std::vector<RZPoint> streamline_axisym(const AxisymParams& params, double c, std::span<const double> samples,
                                       const std::function<double(double)>& reduced);
// Same, with U or V taken from the closed form.
std::vector<RZPoint> streamline_axisym(const AxisymParams& params, double c, std::span<const double> samples);

using ReducedProfileRZ = std::function<ReducedStateRZ(double)>;
using AxisymField = std::function<FlowState(double z, double r)>;

// Physical (u, v, rho, p)(z, r) assembled from a reduced profile; u is the
// axial and v the radial velocity, w = 0.
AxisymField physical_field_axisym(const AxisymParams& params, ReducedProfileRZ reduced);

// x^e for a coordinate: any sign when e is an integer, x > 0 otherwise.
double coordinate_pow(double x, double e, const char* what);

}  // namespace exactflow

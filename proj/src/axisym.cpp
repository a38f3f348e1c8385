#include "exactflow/axisym.hpp"

#include <cmath>
#include <sstream>

#include "exactflow/roots.hpp"

namespace exactflow {

namespace {

bool is_integer(double e) { return std::floor(e) == e; }

void require_nonzero(double value, const char* what) {
    if (value == 0.0 || !std::isfinite(value)) {
        std::ostringstream msg;
        msg << what << " vanishes or is not finite";
        throw SingularityError(msg.str());
    }
}

// Solve a [2x2] * x = rhs, throwing SingularSystemError at a (relatively)
// vanishing determinant.
std::array<double, 2> solve2(double a11, double a12, double a21, double a22, double b1, double b2,
                             const char* what) {
    const double det = a11 * a22 - a12 * a21;
    const double scale = std::fabs(a11 * a22) + std::fabs(a12 * a21);
    if (!(std::fabs(det) > 1e-14 * scale)) {
        std::ostringstream msg;
        msg << what << ": sonic degeneracy, reduced system is singular";
        throw SingularSystemError(msg.str());
    }
    return {(b1 * a22 - a12 * b2) / det, (a11 * b2 - a21 * b1) / det};
}

void require_positive_density(double Q) {
    if (!(Q > 0.0)) throw DomainError("reduced density Q must be positive");
}

}  // namespace

double coordinate_pow(double x, double e, const char* what) {
    if (x > 0.0) return std::pow(x, e);
    if (is_integer(e) && !(x == 0.0 && e < 0.0)) return std::pow(x, e);
    std::ostringstream msg;
    msg << what << ": coordinate " << x << " outside the domain of the power " << e;
    throw DomainError(msg.str());
}

void AxisymParams::validate() const {
    if (!std::isfinite(m) || m == -1.0) throw ConfigError("AxisymParams: m must be finite and different from -1");
    try {
        require_polytropic_gamma(gamma);
    } catch (const DomainError& e) {
        throw ConfigError(std::string("AxisymParams: ") + e.what());
    }
    if (!std::isfinite(c1) || c1 == 0.0) throw ConfigError("AxisymParams: c1 must be finite and nonzero");
    if (!std::isfinite(c2) || !std::isfinite(c3) || !std::isfinite(b))
        throw ConfigError("AxisymParams: non-finite constant");
}

AxisymParams AxisymParams::closed_form(AxisymBranch branch, double m, double gamma, double c1, double c2,
                                       double b) {
    AxisymParams p;
    p.branch = branch;
    p.m = m;
    p.gamma = gamma;
    p.c1 = c1;
    p.c2 = c2;
    p.c3 = 0.0;
    p.b = b;
    p.validate();
    if (!(c1 * c2 < 0.0)) {
        throw ConfigError(
            "closed form with c3 = 0 requires c1 * c2 < 0 (enthalpy term must balance kinetic energy)");
    }
    if (branch == AxisymBranch::pr_independent && gamma == 3.0) {
        p.a = 0.0;  // the gamma = 3 exponential has no free coefficient besides b
        return p;
    }

    // Substitute the ansatz at a reference point where its base is 1 (pz:
    // r = 1 with b = 0; pr: z = 0 with b = 1) and root-find the coefficient.
    std::function<double(double)> residual;
    double sign = 1.0;
    if (branch == AxisymBranch::pz_independent) {
        const double beta = 2.0 * gamma / (1.0 + gamma);
        const double e = -(m + 1.0) * (1.0 + gamma) / 2.0;
        residual = [p, beta, e](double a) {
            const double U = std::pow(a, e);
            const double dU = e * beta * U;
            return reduced_equation_pz(p, U, dU, 1.0);
        };
    } else {
        const double e = pr_power_exponent(m, gamma);
        // V' = a e must satisfy -V'/(m+1) > 0.
        sign = -(e * (m + 1.0) > 0.0 ? 1.0 : -1.0);
        residual = [p, e, sign](double magnitude) { return reduced_equation_pr(p, 1.0, sign * magnitude * e); };
    }
    const auto bracket = scan_for_bracket(residual, {1e-12, 1e12}, 481, true);
    if (!bracket) throw ConfigError("closed form: no real coefficient a solves the reduced equation");
    p.a = sign * find_root(residual, *bracket);
    return p;
}

ReducedStateRZ rhs_pz_branch(const AxisymParams& params, const ReducedStateRZ& s, double r) {
    require_nonzero(r, "rhs_pz_branch: r");
    require_nonzero(s.V, "rhs_pz_branch: V");
    require_positive_density(s.Q);
    const double m = params.m;
    const double g = params.gamma;
    const double dU = -(1.0 + m) * s.U * s.U / s.V;
    // V V' + P'/Q = -m V U ;  g P V' + V P' = -g P ((m+1) U + V/r)
    const auto [dV, dP] = solve2(s.V, 1.0 / s.Q, g * s.P, s.V, -m * s.V * s.U,
                                 -g * s.P * ((m + 1.0) * s.U + s.V / r), "rhs_pz_branch");
    const double dQ = -((1.0 - m) * s.U * s.Q + s.Q * dV + s.V * s.Q / r) / s.V;
    return {dU, dV, dQ, dP};
}

ReducedStateRZ rhs_pr_branch(const AxisymParams& params, const ReducedStateRZ& s, double /*z*/) {
    require_nonzero(s.U, "rhs_pr_branch: U");
    require_positive_density(s.Q);
    const double m = params.m;
    const double g = params.gamma;
    const double dV = -(m + 1.0) * s.V * s.V / s.U;
    // Q U U' + P' = -m Q U V ;  g P U' + U P' = -g P (m+2) V
    const auto [dU, dP] = solve2(s.Q * s.U, 1.0, g * s.P, s.U, -m * s.Q * s.U * s.V,
                                 -g * s.P * (m + 2.0) * s.V, "rhs_pr_branch");
    const double dQ = -(s.Q * dU + (2.0 - m) * s.V * s.Q) / s.U;
    return {dU, dV, dQ, dP};
}

ReducedStateRZ rhs_axisym(const AxisymParams& params, const ReducedStateRZ& s, double coord) {
    return params.branch == AxisymBranch::pz_independent ? rhs_pz_branch(params, s, coord)
                                                         : rhs_pr_branch(params, s, coord);
}

namespace {

void require_closed_form(const AxisymParams& params, AxisymBranch branch) {
    if (params.branch != branch) throw ConfigError("closed form requested for the other axisymmetric branch");
    if (params.c3 != 0.0) throw ConfigError("closed forms exist only for c3 = 0");
    if (std::isnan(params.a)) throw ConfigError("closed-form coefficient a not set; use AxisymParams::closed_form");
}

}  // namespace

ReducedJetRZ closed_form_pz_jet(const AxisymParams& params, double r) {
    require_closed_form(params, AxisymBranch::pz_independent);
    if (!(r > 0.0)) throw DomainError("closed_form_pz: r must be positive");
    const double m = params.m;
    const double g = params.gamma;
    const double beta = 2.0 * g / (1.0 + g);
    const double e = -(m + 1.0) * (1.0 + g) / 2.0;
    const double rb = std::pow(r, beta);
    const double s = params.a * rb + params.b;
    const double ds = params.a * beta * rb / r;
    const double d2s = params.a * beta * (beta - 1.0) * rb / (r * r);
    const double U = positive_pow(s, e, "closed_form_pz: a r^beta + b");
    const double dU = e * U / s * ds;
    const double d2U = e * (e - 1.0) * U / (s * s) * ds * ds + e * U / s * d2s;
    require_nonzero(dU, "closed_form_pz: U'");

    const double V = -(m + 1.0) * U * U / dU;
    const double dlogU = dU / U;
    const double dlogV = 2.0 * dlogU - d2U / dU;
    const double base = U / (V * r);
    const double alpha = (1.0 - m) / (m + 1.0);
    const double Q = params.c1 * positive_pow(U, alpha, "closed_form_pz: U") / (V * r);
    const double P = params.c2 * positive_pow(base, g, "closed_form_pz: U/(V r)");
    const double dQ = Q * (alpha * dlogU - dlogV - 1.0 / r);
    const double dP = P * g * (dlogU - dlogV - 1.0 / r);
    return {{U, V, Q, P}, {dU, V * dlogV, dQ, dP}};
}

ReducedStateRZ closed_form_pz(const AxisymParams& params, double r) { return closed_form_pz_jet(params, r).value; }

double pr_exponential_rate(double m, double c1, double c2) {
    if (c2 == 0.0) throw DomainError("pr_exponential_rate: c2 must be nonzero");
    return -(m + 1.0) * std::pow(std::fabs(c1 / (3.0 * c2)), 0.25);
}

double pr_power_exponent(double m, double gamma) {
    if (gamma == 3.0) throw DomainError("pr_power_exponent: gamma = 3 uses the exponential branch");
    return (m + 1.0) * (gamma + 1.0) / (gamma - 3.0);
}

ReducedJetRZ closed_form_pr_jet(const AxisymParams& params, double z) {
    require_closed_form(params, AxisymBranch::pr_independent);
    const double m = params.m;
    const double g = params.gamma;
    double V, dV, d2V;
    if (g == 3.0) {
        const double k = pr_exponential_rate(m, params.c1, params.c2);
        V = params.b * std::exp(k * z);
        dV = k * V;
        d2V = k * k * V;
    } else {
        const double e = pr_power_exponent(m, g);
        const double s = params.a * z + params.b;
        V = positive_pow(s, e, "closed_form_pr: a z + b");
        dV = params.a * e * V / s;
        d2V = params.a * params.a * e * (e - 1.0) * V / (s * s);
    }
    if (!(V > 0.0)) throw DomainError("closed_form_pr: V must be positive");
    require_nonzero(dV, "closed_form_pr: V'");

    const double U = -(m + 1.0) * V * V / dV;
    const double dlogV = dV / V;
    const double dlogU = 2.0 * dlogV - d2V / dV;
    const double qexp = (2.0 - m) / (m + 1.0);
    const double pexp = (m + 2.0) / (m + 1.0);
    const double Q = params.c1 * std::pow(V, qexp) / U;
    const double P = params.c2 * positive_pow(std::pow(V, pexp) / U, g, "closed_form_pr: V^((m+2)/(m+1))/U");
    const double dQ = Q * (qexp * dlogV - dlogU);
    const double dP = P * g * (pexp * dlogV - dlogU);
    return {{U, V, Q, P}, {U * dlogU, dV, dQ, dP}};
}

ReducedStateRZ closed_form_pr(const AxisymParams& params, double z) { return closed_form_pr_jet(params, z).value; }

ReducedJetRZ closed_form_axisym_jet(const AxisymParams& params, double coord) {
    return params.branch == AxisymBranch::pz_independent ? closed_form_pz_jet(params, coord)
                                                         : closed_form_pr_jet(params, coord);
}

FirstIntegrals first_integrals_pz(const AxisymParams& params, const ReducedStateRZ& s, double r) {
    if (!(r > 0.0)) throw DomainError("first_integrals_pz: r must be positive");
    require_nonzero(s.V, "first_integrals_pz: V");
    const double m = params.m;
    const double g = params.gamma;
    const double Ur = positive_pow(s.U, 1.0, "first_integrals_pz: U");
    const double c1 = s.Q * s.V * r * std::pow(Ur, (m - 1.0) / (m + 1.0));
    const double c2 = s.P * std::pow(std::fabs(s.V * r / s.U), g);
    const double K = c2 * g / (c1 * (g - 1.0));
    const double kinetic = 0.5 * s.V * s.V * std::pow(s.U, -2.0 * m / (m + 1.0));
    return {c1, c2, kinetic + K * signed_pow(s.U / (s.V * r), g - 1.0), kinetic};
}

FirstIntegrals first_integrals_pr(const AxisymParams& params, const ReducedStateRZ& s, double /*z*/) {
    require_nonzero(s.U, "first_integrals_pr: U");
    const double m = params.m;
    const double g = params.gamma;
    const double V = positive_pow(s.V, 1.0, "first_integrals_pr: V");
    const double c1 = s.Q * s.U * std::pow(V, (m - 2.0) / (m + 1.0));
    const double ratio = std::pow(V, (m + 2.0) / (m + 1.0)) / s.U;
    const double c2 = s.P * std::pow(std::fabs(1.0 / ratio), g);
    const double K = c2 * g / (c1 * (g - 1.0));
    const double kinetic = 0.5 * s.U * s.U * std::pow(V, -2.0 * m / (m + 1.0));
    return {c1, c2, kinetic + K * signed_pow(ratio, g - 1.0), kinetic};
}

FirstIntegrals first_integrals_axisym(const AxisymParams& params, const ReducedStateRZ& s, double coord) {
    return params.branch == AxisymBranch::pz_independent ? first_integrals_pz(params, s, coord)
                                                         : first_integrals_pr(params, s, coord);
}

double reduced_equation_pz(const AxisymParams& params, double U, double dU, double r) {
    const double m = params.m;
    const double g = params.gamma;
    require_nonzero(dU, "reduced_equation_pz: U'");
    const double kinetic =
        0.5 * (1.0 + m) * (1.0 + m) * positive_pow(U, (2.0 * m + 4.0) / (m + 1.0), "reduced_equation_pz: U") / (dU * dU);
    const double base = positive_pow(-dU / ((m + 1.0) * U * r), 1.0, "reduced_equation_pz: -U'/((m+1) U r)");
    return kinetic + params.enthalpy_coefficient() * std::pow(base, g - 1.0);
}

double reduced_equation_pr(const AxisymParams& params, double V, double dV) {
    const double m = params.m;
    const double g = params.gamma;
    require_nonzero(dV, "reduced_equation_pr: V'");
    const double Vp = positive_pow(V, 1.0, "reduced_equation_pr: V");
    const double lead = std::pow(Vp, (m + 2.0) / (m + 1.0)) / dV;
    const double base =
        positive_pow(-std::pow(Vp, -m / (m + 1.0)) * dV / (m + 1.0), 1.0, "reduced_equation_pr: -V^(-m/(m+1)) V'/(m+1)");
    return 0.5 * (m + 1.0) * (m + 1.0) * lead * lead + params.enthalpy_coefficient() * std::pow(base, g - 1.0);
}

std::vector<RZPoint> streamline_axisym(const AxisymParams& params, double c, std::span<const double> samples,
                                       const std::function<double(double)>& reduced) {
    const double e = -1.0 / (params.m + 1.0);
    std::vector<RZPoint> out;
    out.reserve(samples.size());
    for (double s : samples) {
        const double f = positive_pow(reduced(s), e, "streamline_axisym: reduced function");
        if (params.branch == AxisymBranch::pz_independent)
            out.push_back({c * f, s});
        else
            out.push_back({s, c * f});
    }
    return out;
}

std::vector<RZPoint> streamline_axisym(const AxisymParams& params, double c, std::span<const double> samples) {
    if (params.branch == AxisymBranch::pz_independent)
        return streamline_axisym(params, c, samples, [&](double r) { return closed_form_pz(params, r).U; });
    return streamline_axisym(params, c, samples, [&](double z) { return closed_form_pr(params, z).V; });
}

AxisymField physical_field_axisym(const AxisymParams& params, ReducedProfileRZ reduced) {
    params.validate();
    const double m = params.m;
    if (params.branch == AxisymBranch::pz_independent) {
        return [m, reduced = std::move(reduced)](double z, double r) {
            if (!(r > 0.0)) throw DomainError("axisymmetric field: r must be positive");
            const ReducedStateRZ s = reduced(r);
            const double zm = coordinate_pow(z, m, "axisymmetric field");
            return FlowState(z * zm * s.U, zm * s.V, 0.0, coordinate_pow(z, -2.0 * m, "axisymmetric field") * s.Q, s.P);
        };
    }
    return [m, reduced = std::move(reduced)](double z, double r) {
        if (!(r > 0.0)) throw DomainError("axisymmetric field: r must be positive");
        const ReducedStateRZ s = reduced(z);
        const double rm = std::pow(r, m);
        return FlowState(rm * s.U, r * rm * s.V, 0.0, std::pow(r, -2.0 * m) * s.Q, s.P);
    };
}

}  // namespace exactflow

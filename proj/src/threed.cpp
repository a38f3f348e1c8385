#include "exactflow/threed.hpp"

#include <cmath>
#include <sstream>

#include "exactflow/roots.hpp"

namespace exactflow {

void ThreeDParams::validate() const {
    if (!(std::isfinite(m) && std::isfinite(n))) throw ConfigError("ThreeDParams: exponents must be finite");
    if (n + m + 1.0 == 0.0) throw ConfigError("ThreeDParams: n + m + 1 must be nonzero");
    try {
        require_polytropic_gamma(gamma);
    } catch (const DomainError& e) {
        throw ConfigError(std::string("ThreeDParams: ") + e.what());
    }
    if (!std::isfinite(c1) || c1 == 0.0) throw ConfigError("ThreeDParams: c1 must be finite and nonzero");
    if (!(std::isfinite(c2) && std::isfinite(c3) && std::isfinite(c4) && std::isfinite(b)))
        throw ConfigError("ThreeDParams: non-finite constant");
}

double ThreeDParams::A() const {
    const double coef = a();
    if (!(coef > 0.0)) {
        std::ostringstream msg;
        msg << "ThreeDParams: A = (2a)^(-1/(gamma+1)) needs a > 0 (c1 and c2 of equal sign), got a = " << coef;
        throw DomainError(msg.str());
    }
    return std::pow(2.0 * coef, -1.0 / (gamma + 1.0));
}

ReducedState3D rhs_3d(const ThreeDParams& params, const ReducedState3D& s, double /*z*/, E5Form e5) {
    if (s.W == 0.0 || !std::isfinite(s.W)) throw SingularityError("rhs_3d: W vanishes");
    if (!(s.Q > 0.0)) throw DomainError("rhs_3d: Q must be positive");
    const double m = params.m;
    const double n = params.n;
    const double g = params.gamma;
    const double dU = -((1.0 + n) * s.U * s.U + m * s.U * s.V) / s.W;
    const double dV = -(n * s.U * s.V + (1.0 + m) * s.V * s.V) / s.W;

    // E4: Q W W' + P' = -Q (n U W + m V W)
    // E5: g P W' + W P' = -g P ((n+1) U + (m+1) V)      (corrected)
    //     g W'   + W P' = -g ((n+1) U + (m+1) V)        (literal)
    const double e5_scale = e5 == E5Form::corrected ? s.P : 1.0;
    const double a11 = s.Q * s.W, a12 = 1.0;
    const double a21 = g * e5_scale, a22 = s.W;
    const double b1 = -s.Q * (n * s.U * s.W + m * s.V * s.W);
    const double b2 = -g * e5_scale * ((n + 1.0) * s.U + (m + 1.0) * s.V);
    const double det = a11 * a22 - a12 * a21;
    if (!(std::fabs(det) > 1e-14 * (std::fabs(a11 * a22) + std::fabs(a21)))) {
        throw SingularSystemError("rhs_3d: sonic degeneracy W^2 = gamma P / Q");
    }
    const double dW = (b1 * a22 - a12 * b2) / det;
    const double dP = (a11 * b2 - a21 * b1) / det;
    // E1: W Q' + Q W' = -(1-n) Q U - (1-m) Q V
    const double dQ = (-(1.0 - n) * s.Q * s.U - (1.0 - m) * s.Q * s.V - s.Q * dW) / s.W;
    return {dU, dV, dW, dQ, dP};
}

AuxVars to_aux(const ReducedState3D& s, double m, double n) {
    const double k = 1.0 + n + m;
    if (k == 0.0) throw DomainError("to_aux: n + m + 1 must be nonzero");
    if (s.W == 0.0) throw SingularityError("to_aux: W vanishes");
    const double S = positive_pow(s.U, 1.0 / k, "to_aux: U");
    const double R = positive_pow(s.V, 1.0 / k, "to_aux: V");
    AuxVars aux;
    aux.S = S;
    aux.R = R;
    aux.T = std::pow(R, n + 1.0) * std::pow(S, m + 1.0) / s.W;
    aux.X = std::pow(S, n) * std::pow(R, -n - 1.0);
    aux.Y = std::pow(R, m) * std::pow(S, -m - 1.0);
    return aux;
}

namespace {

// Solves n lnS - (n+1) lnR = lnX, -(m+1) lnS + m lnR = lnY.
std::array<double, 2> log_sr(double log_x, double log_y, double m, double n) {
    const double det = -(n + m + 1.0);
    if (det == 0.0) throw DomainError("from_aux: degenerate reconstruction, n + m + 1 = 0");
    const double log_s = (m * log_x + (n + 1.0) * log_y) / det;
    const double log_r = (n * log_y + (m + 1.0) * log_x) / det;
    return {log_s, log_r};
}

}  // namespace

VelocityProfile from_aux(const AuxVars& aux, double m, double n) {
    if (!(aux.X > 0.0 && aux.Y > 0.0)) throw DomainError("from_aux: X and Y must be positive");
    if (aux.T == 0.0) throw SingularityError("from_aux: T vanishes");
    const auto [log_s, log_r] = log_sr(std::log(aux.X), std::log(aux.Y), m, n);
    const double k = 1.0 + n + m;
    VelocityProfile out;
    out.U = std::exp(k * log_s);
    out.V = std::exp(k * log_r);
    out.W = std::exp((n + 1.0) * log_r + (m + 1.0) * log_s) / aux.T;
    return out;
}

FirstIntegrals first_integrals_3d(const ThreeDParams& params, const ReducedState3D& s) {
    const double m = params.m;
    const double n = params.n;
    const double g = params.gamma;
    const AuxVars aux = to_aux(s, m, n);
    const double S = aux.S;
    const double R = aux.R;
    const double c1 = s.Q * s.W * std::pow(R, 2.0 * m - 1.0 - n) * std::pow(S, 2.0 * n - 1.0 - m);
    const double c2 = s.P * std::pow(std::fabs(s.W * std::pow(S, -1.0 - m) * std::pow(R, -1.0 - n)), g);
    const double kinetic = s.W * s.W * std::pow(R, -2.0 * m) * std::pow(S, -2.0 * n);
    return {c1, c2, kinetic + 2.0 * c2 * g / (c1 * (g - 1.0)) * signed_pow(aux.T, g - 1.0), kinetic};
}

double x_equation_residual(const ThreeDParams& params, double X, double dX) {
    const double Y = X + params.c4;
    if (!(X > 0.0 && Y > 0.0)) throw DomainError("x_equation: X and X + c4 must be positive");
    if (dX == 0.0) throw SingularityError("x_equation: X' vanishes");
    const double T = dX / (X * Y);
    return 1.0 / (2.0 * dX * dX) + params.a() * signed_pow(T, params.gamma - 1.0) - 0.5 * params.c3;
}

double x_equation_rhs(const ThreeDParams& params, double X, XBranch branch) {
    const double Y = X + params.c4;
    if (!(X > 0.0 && Y > 0.0)) throw DomainError("x_equation_rhs: X and X + c4 must be positive");
    const double g = params.gamma;
    const double sign = branch == XBranch::decaying ? -1.0 : 1.0;
    const double scale = std::pow(X * Y, (g - 1.0) / (g + 1.0));
    if (params.c3 == 0.0) {
        // 1/(2 s^2) = -sign a (s/(XY))^{g-1}
        const double coef = -sign * params.a();
        if (!(coef > 0.0)) throw BracketError("x_equation_rhs: no real root on the requested branch for c3 = 0");
        return sign * std::pow(2.0 * coef, -1.0 / (g + 1.0)) * scale;
    }
    auto residual = [&](double magnitude) { return x_equation_residual(params, X, sign * magnitude); };
    const auto bracket = scan_for_bracket(residual, {1e-12 * scale, 1e12 * scale}, 721, true);
    if (!bracket) throw BracketError("x_equation_rhs: no real root on the requested branch");
    return sign * find_root(residual, *bracket);
}

XJet closed_form_X_jet(const ThreeDParams& params, double z) {
    if (params.c3 != 0.0) throw ConfigError("closed_form_X: closed forms exist only for c3 = 0");
    const double g = params.gamma;
    const double A = params.A();
    XJet out;
    if (g == 3.0) {
        const double E = std::exp(-A * z + params.b);
        const double c4 = params.c4;
        if (!(2.0 * E > std::fabs(c4))) {
            throw DomainError("closed_form_X: need 2 e^(-Az+b) > |c4| for the decaying branch");
        }
        out.X = (2.0 * E - c4) * (2.0 * E - c4) / (8.0 * E);
        out.dX = -A * E / 2.0 + A * c4 * c4 / (8.0 * E);
        out.d2X = A * A * E / 2.0 + A * A * c4 * c4 / (8.0 * E);
        return out;
    }
    if (params.c4 != 0.0) throw ConfigError("closed_form_X: the gamma != 3 closed form requires c4 = 0");
    const double base = A * (g - 3.0) * (z + params.b) / (g + 1.0);
    out.X = positive_pow(base, -(g + 1.0) / (g - 3.0), "closed_form_X: A (gamma-3)(z+b)/(gamma+1)");
    const double p = 2.0 * (g - 1.0) / (g + 1.0);
    out.dX = -A * std::pow(out.X, p);
    out.d2X = -A * p * std::pow(out.X, p - 1.0) * out.dX;
    return out;
}

double closed_form_X(const ThreeDParams& params, double z) { return closed_form_X_jet(params, z).X; }

ReducedJet3D reconstruct_from_x_jet(const ThreeDParams& params, const XJet& x) {
    const double m = params.m;
    const double n = params.n;
    const double g = params.gamma;
    const double k = 1.0 + n + m;
    const double X = x.X;
    const double Y = X + params.c4;
    if (!(X > 0.0 && Y > 0.0)) throw DomainError("reconstruct: X and X + c4 must be positive");
    if (x.dX == 0.0) throw SingularityError("reconstruct: X' vanishes");

    const double T = x.dX / (X * Y);
    const auto [log_s, log_r] = log_sr(std::log(X), std::log(Y), m, n);
    const double S = std::exp(log_s);
    const double R = std::exp(log_r);

    ReducedJet3D out;
    ReducedState3D& s = out.value;
    s.U = std::pow(S, k);
    s.V = std::pow(R, k);
    s.W = std::pow(R, n + 1.0) * std::pow(S, m + 1.0) / T;
    s.P = params.c2 * std::pow(std::fabs(T), g);
    s.Q = params.c1 * T * std::pow(R, -2.0 * m) * std::pow(S, -2.0 * n);

    // Logarithmic derivatives; Y' = X'.
    const auto [dlog_s, dlog_r] = log_sr(x.dX / X, x.dX / Y, m, n);
    const double dlog_t = x.d2X / x.dX - x.dX / X - x.dX / Y;
    ReducedState3D& d = out.derivative;
    d.U = s.U * k * dlog_s;
    d.V = s.V * k * dlog_r;
    d.W = s.W * ((n + 1.0) * dlog_r + (m + 1.0) * dlog_s - dlog_t);
    d.P = s.P * g * dlog_t;
    d.Q = s.Q * (dlog_t - 2.0 * m * dlog_r - 2.0 * n * dlog_s);
    return out;
}

ReducedState3D reconstruct_from_x(const ThreeDParams& params, double X, double dX) {
    return reconstruct_from_x_jet(params, {X, dX, 0.0}).value;
}

ReducedJet3D reconstruct_3d_jet(const ThreeDParams& params, double z) {
    return reconstruct_from_x_jet(params, closed_form_X_jet(params, z));
}

ReducedState3D reconstruct_3d(const ThreeDParams& params, double z) { return reconstruct_3d_jet(params, z).value; }

std::vector<Point3> streamlines_3d_parametric(double gamma, double a1, double a2, double a3, double b,
                                              std::span<const double> ts) {
    if (gamma == -1.0) throw DomainError("streamlines_3d_parametric: gamma = -1");
    const double rate = -(gamma - 3.0) / (gamma + 1.0);
    std::vector<Point3> out;
    out.reserve(ts.size());
    for (double t : ts) out.push_back({a1 * std::exp(t), a2 * std::exp(t), -b + a3 * std::exp(rate * t)});
    return out;
}

Field3 physical_field_3d(const ThreeDParams& params, ReducedProfile3D reduced) {
    params.validate();
    const double m = params.m;
    const double n = params.n;
    return [m, n, reduced = std::move(reduced)](const Point3& pt) {
        const ReducedState3D s = reduced(pt.z);
        const double xn = coordinate_pow(pt.x, n, "3D field: x");
        const double ym = coordinate_pow(pt.y, m, "3D field: y");
        const double scale = xn * ym;
        const double rho_scale = coordinate_pow(pt.x, -2.0 * n, "3D field: x") * coordinate_pow(pt.y, -2.0 * m, "3D field: y");
        return FlowState(pt.x * scale * s.U, pt.y * scale * s.V, scale * s.W, rho_scale * s.Q, s.P);
    };
}

}  // namespace exactflow

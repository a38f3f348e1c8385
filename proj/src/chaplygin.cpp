#include "exactflow/chaplygin.hpp"

#include <algorithm>
#include <memory>
#include <cmath>
#include <sstream>

namespace exactflow {

double ScalarFn::derivative(double t) const {
    if (slope) return slope(t);
    const double h = 1e-6 * std::max(1.0, std::fabs(t));
    return (value(t + h) - value(t - h)) / (2.0 * h);
}

ScalarFn ScalarFn::polynomial(std::vector<double> coeffs) {
    if (coeffs.empty()) coeffs.push_back(0.0);
    ScalarFn fn;
    fn.value = [coeffs](double t) {
        double acc = 0.0;
        for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * t + *it;
        return acc;
    };
    fn.slope = [coeffs](double t) {
        double acc = 0.0;
        for (std::size_t i = coeffs.size(); i-- > 1;) acc = acc * t + static_cast<double>(i) * coeffs[i];
        return acc;
    };
    return fn;
}

double ChaplyginFamily::relation(double phi, const Point3& pt) const {
    return a_(phi) * pt.x + b_(phi) * pt.y + c_(phi) * pt.z + d_(phi);
}

double ChaplyginFamily::relation_slope(double phi, const Point3& pt) const {
    return a_.derivative(phi) * pt.x + b_.derivative(phi) * pt.y + c_.derivative(phi) * pt.z +
           d_.derivative(phi);
}

Vec3 ChaplyginFamily::normal(double phi) const {
    const Vec3 nrm{a_(phi), b_(phi), c_(phi)};
    if (!is_finite(nrm)) throw DomainError("ChaplyginFamily: non-finite coefficient");
    if (nrm == Vec3{}) {
        std::ostringstream msg;
        msg << "ChaplyginFamily: coefficients (a, b, c) vanish at phi = " << phi;
        throw DomainError(msg.str());
    }
    return nrm;
}

double solve_potential_implicit(const ChaplyginFamily& family, const Point3& pt, Interval bracket) {
    const double phi = find_root([&](double t) { return family.relation(t, pt); }, bracket);
    family.normal(phi);
    return phi;
}

Vec3 implicit_gradient(const ChaplyginFamily& family, const Point3& pt, double phi) {
    const Vec3 nrm = family.normal(phi);
    const double slope = family.relation_slope(phi, pt);
    if (slope == 0.0 || !std::isfinite(slope)) {
        throw SingularityError("implicit_gradient: relation is stationary in phi (characteristic envelope)");
    }
    return -1.0 * nrm / slope;
}

void RationalPotential::validate() const {
    if (n[0] == 0.0 && n[1] == 0.0 && n[2] == 0.0 && n[3] == 0.0) {
        throw ConfigError("RationalPotential: denominator coefficients are all zero");
    }
    if (!f.value) throw ConfigError("RationalPotential: missing outer function f");
}

namespace {

struct Ratio {
    double num;
    double den;
};

Ratio ratio(const RationalPotential& rp, const Point3& pt) {
    const double num = rp.k[0] * pt.x + rp.k[1] * pt.y + rp.k[2] * pt.z + rp.k[3];
    const double den = rp.n[0] * pt.x + rp.n[1] * pt.y + rp.n[2] * pt.z + rp.n[3];
    if (den == 0.0) {
        std::ostringstream msg;
        msg << "rational potential: zero denominator at (" << pt.x << ", " << pt.y << ", " << pt.z << ")";
        throw SingularityError(msg.str());
    }
    return {num, den};
}

}  // namespace

double rational_potential_value(const RationalPotential& rp, const Point3& pt) {
    const auto [num, den] = ratio(rp, pt);
    return rp.f(num / den);
}

Vec3 rational_potential_gradient(const RationalPotential& rp, const Point3& pt) {
    const auto [num, den] = ratio(rp, pt);
    const double s = num / den;
    const double fs = rp.f.derivative(s);
    const Vec3 k{rp.k[0], rp.k[1], rp.k[2]};
    const Vec3 n{rp.n[0], rp.n[1], rp.n[2]};
    return (fs / den) * (k - s * n);
}

PotentialSampler PotentialSampler::implicit(ChaplyginFamily family, Interval bracket) {
    auto shared = std::make_shared<const ChaplyginFamily>(std::move(family));
    PotentialSampler s;
    s.value = [shared, bracket](const Point3& pt) { return solve_potential_implicit(*shared, pt, bracket); };
    s.exact_gradient = [shared, bracket](const Point3& pt) {
        return implicit_gradient(*shared, pt, solve_potential_implicit(*shared, pt, bracket));
    };
    return s;
}

PotentialSampler PotentialSampler::rational(RationalPotential rp) {
    rp.validate();
    auto shared = std::make_shared<const RationalPotential>(std::move(rp));
    PotentialSampler s;
    s.value = [shared](const Point3& pt) { return rational_potential_value(*shared, pt); };
    s.exact_gradient = [shared](const Point3& pt) { return rational_potential_gradient(*shared, pt); };
    return s;
}

namespace {

double sample(const PotentialSampler& sampler, const Point3& pt) {
    double v;
    try {
        v = sampler.value(pt);
    } catch (const Error& e) {
        throw StencilError(std::string("potential stencil failed: ") + e.what());
    }
    if (!std::isfinite(v)) throw StencilError("potential stencil: non-finite value");
    return v;
}

Vec3 sample_gradient(const PotentialSampler& sampler, const Point3& pt) {
    Vec3 g;
    try {
        g = sampler.exact_gradient(pt);
    } catch (const Error& e) {
        throw StencilError(std::string("gradient stencil failed: ") + e.what());
    }
    if (!is_finite(g)) throw StencilError("gradient stencil: non-finite value");
    return g;
}

void require_spacing(double h) {
    if (!(h > 0.0) || !std::isfinite(h)) throw DomainError("stencil spacing must be positive");
}

}  // namespace

Vec3 gradient(const PotentialSampler& sampler, const Point3& pt, double h) {
    require_spacing(h);
    if (sampler.has_analytic_gradient()) return sample_gradient(sampler, pt);
    Vec3 g;
    for (int i = 0; i < 3; ++i) {
        const Vec3 e = h * axis(i);
        g[i] = (sample(sampler, pt + e) - sample(sampler, pt - e)) / (2.0 * h);
    }
    return g;
}

Hessian hessian(const PotentialSampler& sampler, const Point3& pt, double h) {
    require_spacing(h);
    double m[3][3];
    if (sampler.has_analytic_gradient()) {
        Vec3 cols[3];
        for (int j = 0; j < 3; ++j) {
            const Vec3 e = h * axis(j);
            cols[j] = (sample_gradient(sampler, pt + e) - sample_gradient(sampler, pt - e)) / (2.0 * h);
        }
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) m[i][j] = 0.5 * (cols[j][i] + cols[i][j]);
    } else {
        const double c = sample(sampler, pt);
        for (int i = 0; i < 3; ++i) {
            const Vec3 e = h * axis(i);
            m[i][i] = (sample(sampler, pt + e) - 2.0 * c + sample(sampler, pt - e)) / (h * h);
        }
        for (int i = 0; i < 3; ++i) {
            for (int j = i + 1; j < 3; ++j) {
                const Vec3 ei = h * axis(i);
                const Vec3 ej = h * axis(j);
                const double v = (sample(sampler, pt + ei + ej) - sample(sampler, pt + ei - ej) -
                                  sample(sampler, pt - ei + ej) + sample(sampler, pt - ei - ej)) /
                                 (4.0 * h * h);
                m[i][j] = m[j][i] = v;
            }
        }
    }
    return {m[0][0], m[1][1], m[2][2], m[0][1], m[0][2], m[1][2]};
}

PotentialResidual potential_residual_terms(const PotentialSampler& sampler, const Point3& pt, double h) {
    const Vec3 g = gradient(sampler, pt, h);
    if (norm(g) == 0.0) throw DomainError("potential_residual: gradient vanishes at the evaluation point");
    const Hessian H = hessian(sampler, pt, h);
    const double x2 = g.x * g.x, y2 = g.y * g.y, z2 = g.z * g.z;
    const double terms[6] = {
        (y2 + z2) * H.xx,           (x2 + z2) * H.yy,           (x2 + y2) * H.zz,
        -2.0 * g.x * g.y * H.xy,    -2.0 * g.x * g.z * H.xz,    -2.0 * g.y * g.z * H.yz,
    };
    PotentialResidual out;
    for (double t : terms) {
        out.residual += t;
        out.scale = std::max(out.scale, std::fabs(t));
    }
    return out;
}

double potential_residual(const PotentialSampler& sampler, const Point3& pt, double h) {
    return potential_residual_terms(sampler, pt, h).residual;
}

double characteristic_residual(const PotentialSampler& phi, const PotentialSampler& cap_phi, const Point3& pt,
                               double h) {
    const Vec3 a = gradient(phi, pt, h);
    const Vec3 b = gradient(cap_phi, pt, h);
    const double xy = a.x * b.y - a.y * b.x;
    const double xz = a.x * b.z - a.z * b.x;
    const double yz = a.y * b.z - a.z * b.y;
    return xy * xy + xz * xz + yz * yz;
}

FlowState chaplygin_state(const Vec3& grad_phi, const GasLaw& law) {
    if (law.kind() != GasLaw::Kind::chaplygin) throw DomainError("chaplygin_state: law must be Chaplygin");
    const double speed = norm(grad_phi);
    if (!(speed > 0.0)) throw SingularityError("chaplygin_state: stagnation point, density undefined");
    const double rho = std::sqrt(law.a()) / speed;
    return FlowState(grad_phi.x, grad_phi.y, grad_phi.z, rho, law.chaplygin_pressure(rho));
}

}  // namespace exactflow

#include "exactflow/verify.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <sstream>

namespace exactflow {

double ResidualReport::magnitude(std::size_t i) const { return std::fabs(residuals.at(i)); }

double ResidualReport::normalized(std::size_t i) const {
    const double s = scales.at(i);
    return s > 0.0 ? std::fabs(residuals[i]) / s : std::fabs(residuals[i]);
}

double ResidualReport::max_abs() const {
    double out = 0.0;
    for (std::size_t i = 0; i < residuals.size(); ++i) out = std::max(out, magnitude(i));
    return out;
}

double ResidualReport::max_normalized() const {
    double out = 0.0;
    for (std::size_t i = 0; i < residuals.size(); ++i) out = std::max(out, normalized(i));
    return out;
}

namespace {

struct Prim {
    double u, v, w, rho, p;
};

Prim prim(const FlowState& s) { return {s.u(), s.v(), s.w(), s.rho(), s.p()}; }

Prim central(const Prim& plus, const Prim& minus, double h) {
    const double k = 0.5 / h;
    return {(plus.u - minus.u) * k, (plus.v - minus.v) * k, (plus.w - minus.w) * k, (plus.rho - minus.rho) * k,
            (plus.p - minus.p) * k};
}

template <class F>
FlowState sample(const F& f, const char* where) {
    try {
        return f();
    } catch (const StencilError&) {
        throw;
    } catch (const Error& e) {
        throw StencilError(std::string(where) + ": " + e.what());
    }
}

double max_abs_of(std::initializer_list<double> terms) {
    double out = 0.0;
    for (double t : terms) out = std::max(out, std::fabs(t));
    return out;
}

}  // namespace

ResidualReport euler_residual_3d(const FieldSampler3& field, const Point3& pt, double h, double gamma) {
    if (!(h > 0.0)) throw StencilError("euler_residual_3d: h must be positive");
    const Prim c = prim(sample([&] { return field(pt); }, "euler_residual_3d"));
    std::array<Prim, 3> d{};
    for (int i = 0; i < 3; ++i) {
        const Vec3 e = axis(i) * h;
        const Prim plus = prim(sample([&] { return field(pt + e); }, "euler_residual_3d"));
        const Prim minus = prim(sample([&] { return field(pt - e); }, "euler_residual_3d"));
        d[i] = central(plus, minus, h);
    }
    const Prim& dx = d[0];
    const Prim& dy = d[1];
    const Prim& dz = d[2];
    const double div = dx.u + dy.v + dz.w;

    ResidualReport rep;
    rep.h = h;
    rep.point = pt;
    rep.labels = {"continuity", "momentum_x", "momentum_y", "momentum_z", "energy"};

    const double adv_rho = c.u * dx.rho + c.v * dy.rho + c.w * dz.rho;
    rep.residuals.push_back(adv_rho + c.rho * div);
    rep.scales.push_back(max_abs_of({c.u * dx.rho, c.v * dy.rho, c.w * dz.rho, c.rho * dx.u, c.rho * dy.v, c.rho * dz.w}));

    const std::array<std::array<double, 3>, 3> grad = {{{dx.u, dy.u, dz.u}, {dx.v, dy.v, dz.v}, {dx.w, dy.w, dz.w}}};
    const std::array<double, 3> dp = {dx.p, dy.p, dz.p};
    for (int k = 0; k < 3; ++k) {
        const double a = c.rho * c.u * grad[k][0];
        const double b = c.rho * c.v * grad[k][1];
        const double cc = c.rho * c.w * grad[k][2];
        rep.residuals.push_back(a + b + cc + dp[k]);
        rep.scales.push_back(max_abs_of({a, b, cc, dp[k]}));
    }

    const double e1 = c.u * dx.p, e2 = c.v * dy.p, e3 = c.w * dz.p;
    rep.residuals.push_back(e1 + e2 + e3 + gamma * c.p * div);
    rep.scales.push_back(
        max_abs_of({e1, e2, e3, gamma * c.p * dx.u, gamma * c.p * dy.v, gamma * c.p * dz.w}));
    return rep;
}

ResidualReport euler_residual_axisym(const FieldSamplerRZ& field, double z, double r, double h, double gamma) {
    if (!(h > 0.0)) throw StencilError("euler_residual_axisym: h must be positive");
    if (!(r > h)) {
        std::ostringstream msg;
        msg << "euler_residual_axisym: stencil reaches the axis (r = " << r << ", h = " << h << ")";
        throw StencilError(msg.str());
    }
    const char* where = "euler_residual_axisym";
    const Prim c = prim(sample([&] { return field(z, r); }, where));
    const Prim dz = central(prim(sample([&] { return field(z + h, r); }, where)),
                            prim(sample([&] { return field(z - h, r); }, where)), h);
    const Prim dr = central(prim(sample([&] { return field(z, r + h); }, where)),
                            prim(sample([&] { return field(z, r - h); }, where)), h);
    // u axial, v radial
    const double div = dz.u + dr.v + c.v / r;

    ResidualReport rep;
    rep.h = h;
    rep.point = {z, r, 0.0};
    rep.labels = {"continuity", "momentum_z", "momentum_r", "energy"};

    rep.residuals.push_back(c.u * dz.rho + c.v * dr.rho + c.rho * div);
    rep.scales.push_back(max_abs_of({c.u * dz.rho, c.v * dr.rho, c.rho * dz.u, c.rho * dr.v, c.rho * c.v / r}));

    const double mz1 = c.rho * c.u * dz.u, mz2 = c.rho * c.v * dr.u;
    rep.residuals.push_back(mz1 + mz2 + dz.p);
    rep.scales.push_back(max_abs_of({mz1, mz2, dz.p}));

    const double mr1 = c.rho * c.u * dz.v, mr2 = c.rho * c.v * dr.v;
    rep.residuals.push_back(mr1 + mr2 + dr.p);
    rep.scales.push_back(max_abs_of({mr1, mr2, dr.p}));

    const double e1 = c.u * dz.p, e2 = c.v * dr.p;
    rep.residuals.push_back(e1 + e2 + gamma * c.p * div);
    rep.scales.push_back(max_abs_of({e1, e2, gamma * c.p * dz.u, gamma * c.p * dr.v, gamma * c.p * c.v / r}));
    return rep;
}

ConvergenceResult convergence_order(const std::function<double(double)>& residual_at, std::span<const double> hs) {
    if (hs.size() < 3) throw ConfigError("convergence_order: need at least three spacings");
    ConvergenceResult out;
    out.hs.assign(hs.begin(), hs.end());
    for (double h : hs) {
        if (!(h > 0.0)) throw ConfigError("convergence_order: spacings must be positive");
        const double r = std::fabs(residual_at(h));
        if (!std::isfinite(r)) throw DomainError("convergence_order: non-finite residual");
        out.residuals.push_back(r);
        if (r < kSaturationFloor) out.saturated = true;
    }
    if (out.saturated) return out;
    const std::size_t n = hs.size();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += std::log(out.hs[i]);
        my += std::log(out.residuals[i]);
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = std::log(out.hs[i]) - mx;
        sxy += dx * (std::log(out.residuals[i]) - my);
        sxx += dx * dx;
    }
    if (sxx == 0.0) throw ConfigError("convergence_order: spacings must differ");
    out.slope = sxy / sxx;
    return out;
}

InvariantDrift invariants_along_curve(std::span<const FlowState> states, double gamma) {
    InvariantDrift out;
    if (states.empty()) return out;
    std::vector<double> i1, i2;
    i1.reserve(states.size());
    i2.reserve(states.size());
    for (const FlowState& s : states) {
        i1.push_back(entropy_invariant(gamma, s));
        i2.push_back(bernoulli_invariant(gamma, s));
    }
    auto drift = [](const std::vector<double>& v) {
        const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
        double dev = 0.0, mag = 0.0;
        for (double x : v) {
            dev = std::max(dev, std::fabs(x - mean));
            mag = std::max(mag, std::fabs(x));
        }
        const double ref = std::fabs(mean) > 0.0 ? std::fabs(mean) : mag;
        return ref > 0.0 ? dev / ref : dev;
    };
    out.entropy = drift(i1);
    out.bernoulli = drift(i2);
    return out;
}

InvariantDrift invariants_along_curve(const FieldSampler3& field, std::span<const Point3> curve, double gamma) {
    std::vector<FlowState> states;
    states.reserve(curve.size());
    for (const Point3& p : curve) states.push_back(field(p));
    return invariants_along_curve(states, gamma);
}

}  // namespace exactflow

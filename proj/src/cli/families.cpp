#include "cli/families.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "exactflow/axisym.hpp"
#include "exactflow/chaplygin.hpp"
#include "exactflow/odeint.hpp"
#include "exactflow/threed.hpp"
#include "exactflow/verify.hpp"

namespace exactflow::cli {

using nlohmann::json;

Point3 grid_point(const RunConfig& cfg, std::size_t index) {
    const auto& ax = cfg.grid.axes;
    if (cfg.is_axisym()) {
        const std::size_t nr = static_cast<std::size_t>(ax[1].n);
        return {ax[0].at(static_cast<int>(index / nr)), ax[1].at(static_cast<int>(index % nr)), 0.0};
    }
    const std::size_t nx = static_cast<std::size_t>(ax[0].n);
    const std::size_t ny = static_cast<std::size_t>(ax[1].n);
    return {ax[0].at(static_cast<int>(index % nx)), ax[1].at(static_cast<int>((index / nx) % ny)),
            ax[2].at(static_cast<int>(index / (nx * ny)))};
}

namespace {

double max_spacing(const RunConfig& cfg) {
    return *std::max_element(cfg.verify.spacings.begin(), cfg.verify.spacings.end());
}

std::vector<double> numbers(const json& j, const std::string& what) {
    if (!j.is_array() || j.empty()) throw ConfigError(what + " must be a non-empty array of numbers");
    std::vector<double> out;
    for (const auto& v : j) {
        if (!v.is_number()) throw ConfigError(what + " must contain numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

std::optional<std::vector<double>> initial_state(const RunConfig& cfg, std::size_t size) {
    if (!cfg.params.contains("initial")) return std::nullopt;
    auto v = numbers(cfg.params["initial"], "params.initial");
    if (v.size() != size) throw ConfigError("params.initial has the wrong number of components");
    return v;
}

// Multiplies one quantity by 1 + amplitude * (sum of coordinates).
FlowState perturbed(const FlowState& s, const std::optional<Perturbation>& pert, double coord) {
    if (!pert) return s;
    const double f = 1.0 + pert->amplitude * coord;
    double u = s.u(), v = s.v(), w = s.w(), rho = s.rho(), p = s.p();
    if (pert->quantity == "u") u *= f;
    if (pert->quantity == "v") v *= f;
    if (pert->quantity == "w") w *= f;
    if (pert->quantity == "rho") rho *= f;
    if (pert->quantity == "p") p *= f;
    return FlowState(u, v, w, rho, p);
}

// Dense reduced profile over [lo, hi] from y0 at `start`, by RK4 with Hermite
// interpolation on each side of the start point.
template <std::size_t N, class Rhs>
std::function<StateVec<N>(double)> dense_profile(Rhs rhs, const StateVec<N>& y0, double start, double lo, double hi,
                                                 double step) {
    std::shared_ptr<HermiteInterpolant<N>> forward, backward;
    auto build = [&](double end) {
        const auto traj = integrate<N>(rhs, y0, {start, end}, StepPolicy::fixed(step));
        if (!traj.completed()) {
            throw ConfigError("reduced integration stopped before covering the grid (" +
                              std::string(to_string(traj.reason)) + ": " + traj.detail + ")");
        }
        return std::make_shared<HermiteInterpolant<N>>(traj, rhs);
    };
    if (hi > start) forward = build(hi);
    if (lo < start) backward = build(lo);
    return [forward, backward, start, y0](double t) {
        if (t == start) return y0;
        if (t > start) {
            if (!forward) throw DomainError("reduced profile: outside the integrated range");
            return (*forward)(t);
        }
        if (!backward) throw DomainError("reduced profile: outside the integrated range");
        return (*backward)(t);
    };
}

template <std::size_t N, class Rhs, class Ints, class Closed>
IntegralCheck check_integrals(Rhs rhs, Ints ints, const StateVec<N>& y0, std::array<double, 2> span, double step,
                              Closed closed) {
    InvariantMonitor<N> monitor;
    monitor.add("c1", [&](const StateVec<N>& y, double t) { return ints(y, t).c1; });
    monitor.add("c2", [&](const StateVec<N>& y, double t) { return ints(y, t).c2; });
    monitor.add("c3", [&](const StateVec<N>& y, double t) { return ints(y, t).c3; },
                [&](const StateVec<N>& y, double t) { return ints(y, t).c3_scale; });
    const auto traj = integrate<N>(rhs, y0, {span[0], span[1]}, StepPolicy::fixed(step), &monitor);
    IntegralCheck out;
    for (const auto& e : monitor.entries()) out.drift.emplace_back(e.label, e.max_drift);
    out.termination = std::string(to_string(traj.reason));
    if (!traj.completed()) out.termination += ": " + traj.detail;
    out.span = span;
    out.steps = traj.size() - 1;
    if (closed) {
        double err = 0.0;
        for (std::size_t i = 0; i < traj.size(); ++i) {
            const StateVec<N> ref = (*closed)(traj.t[i]);
            for (std::size_t k = 0; k < N; ++k)
                err = std::max(err, std::fabs(traj.y[i][k] - ref[k]) / std::max(std::fabs(ref[k]), 1e-300));
        }
        out.closed_form_error = err;
    }
    return out;
}

ScalarFn polynomial_field(const json& coeffs, const std::string& name) {
    return ScalarFn::polynomial(numbers(coeffs, name));
}

GasLaw chaplygin_law(const RunConfig& cfg) {
    double a = 1.0, b = 0.0;
    if (cfg.raw.contains("gas")) {
        const json& g = cfg.raw["gas"];
        if (g.contains("a")) a = g["a"].get<double>();
        if (g.contains("b")) b = g["b"].get<double>();
    }
    try {
        return GasLaw::chaplygin(a, b);
    } catch (const DomainError& e) {
        throw ConfigError(std::string("gas: ") + e.what());
    }
}

Family build_chaplygin(const RunConfig& cfg) {
    Family fam;
    fam.name = cfg.family;
    fam.chaplygin = true;
    fam.law = chaplygin_law(cfg);

    PotentialSampler base;
    if (cfg.family == "chaplygin-implicit") {
        if (!cfg.raw.contains("coefficients")) throw ConfigError("coefficients {a, b, c, d} are required");
        const json& c = cfg.raw["coefficients"];
        for (const char* k : {"a", "b", "c", "d"})
            if (!c.contains(k)) throw ConfigError(std::string("coefficients.") + k + " is required");
        ChaplyginFamily family(polynomial_field(c["a"], "coefficients.a"), polynomial_field(c["b"], "coefficients.b"),
                               polynomial_field(c["c"], "coefficients.c"), polynomial_field(c["d"], "coefficients.d"));
        if (!cfg.raw.contains("bracket")) throw ConfigError("bracket [lo, hi] is required");
        const auto br = numbers(cfg.raw["bracket"], "bracket");
        if (br.size() != 2 || !(br[1] > br[0])) throw ConfigError("bracket must be [lo, hi] with hi > lo");
        base = PotentialSampler::implicit(std::move(family), {br[0], br[1]});
    } else {
        if (!cfg.raw.contains("rational")) throw ConfigError("rational {k, n, f} is required");
        const json& r = cfg.raw["rational"];
        RationalPotential rp;
        const auto k = numbers(r.value("k", json::array()), "rational.k");
        const auto n = numbers(r.value("n", json::array()), "rational.n");
        if (k.size() != 4 || n.size() != 4) throw ConfigError("rational.k and rational.n need four entries");
        std::copy(k.begin(), k.end(), rp.k.begin());
        std::copy(n.begin(), n.end(), rp.n.begin());
        if (r.contains("f")) rp.f = polynomial_field(r["f"], "rational.f");
        rp.validate();
        base = PotentialSampler::rational(rp);
    }

    PotentialSampler sampler = base;
    if (cfg.perturb) {
        const double eps = cfg.perturb->amplitude;
        // phi + eps |x|^2 / 2
        sampler.value = [base, eps](const Point3& p) { return base.value(p) + 0.5 * eps * dot(p, p); };
        sampler.exact_gradient = [base, eps](const Point3& p) { return base.exact_gradient(p) + p * eps; };
    }
    const GasLaw law = *fam.law;
    fam.field = [sampler, law](const Point3& p) { return chaplygin_state(sampler.exact_gradient(p), law); };
    fam.residual = [sampler](const Point3& p, double h) {
        const PotentialResidual r = potential_residual_terms(sampler, p, h);
        return ResidualSample{std::fabs(r.residual), r.normalized()};
    };
    return fam;
}

Family build_axisym(const RunConfig& cfg, bool /*literal_e5*/) {
    Family fam;
    fam.name = cfg.family;
    fam.axisym = true;
    const AxisymBranch branch =
        cfg.family == "axisym-pz" ? AxisymBranch::pz_independent : AxisymBranch::pr_independent;
    const double m = required_param(cfg, "m");
    const double gamma = required_param(cfg, "gamma");
    fam.gamma = gamma;
    // Reduced coordinate: r for the p_z branch, z for the p_r branch.
    const Axis& reduced_axis = cfg.grid.axes[branch == AxisymBranch::pz_independent ? 1 : 0];
    const double margin = 2.0 * max_spacing(cfg);

    AxisymParams params;
    std::function<ReducedStateRZ(double)> profile;
    std::optional<std::function<StateVec<4>(double)>> closed;
    StateVec<4> y0{};
    double start = 0.0;
    const auto init = initial_state(cfg, 4);
    if (init) {
        params.branch = branch;
        params.m = m;
        params.gamma = gamma;
        start = required_param(cfg, "start");
        const ReducedStateRZ s{(*init)[0], (*init)[1], (*init)[2], (*init)[3]};
        // Constants follow from the initial state.
        params.c1 = 1.0;
        params.c2 = 1.0;
        const FirstIntegrals fi = first_integrals_axisym(params, s, start);
        params.c1 = fi.c1;
        params.c2 = fi.c2;
        const FirstIntegrals fi2 = first_integrals_axisym(params, s, start);
        params.c3 = fi2.c3;
        params.validate();
        y0 = s.to_array();
        auto rhs = [params](double t, const StateVec<4>& y) {
            return rhs_axisym(params, ReducedStateRZ::from_array(y), t).to_array();
        };
        auto dense = dense_profile<4>(rhs, y0, start, reduced_axis.lo - margin, reduced_axis.hi + margin,
                                      param(cfg, "profile_step", 2.5e-4));
        profile = [dense](double t) { return ReducedStateRZ::from_array(dense(t)); };
    } else {
        if (param(cfg, "c3", 0.0) != 0.0)
            throw ConfigError("c3 != 0 has no closed form; supply params.initial and params.start");
        params = AxisymParams::closed_form(branch, m, gamma, required_param(cfg, "c1"), required_param(cfg, "c2"),
                                           param(cfg, "b", 0.0));
        profile = [params](double t) { return closed_form_axisym_jet(params, t).value; };
        closed = [params](double t) { return closed_form_axisym_jet(params, t).value.to_array(); };
        start = reduced_axis.lo;
        y0 = profile(start).to_array();
    }

    const AxisymField physical = physical_field_axisym(params, profile);
    const auto pert = cfg.perturb;
    fam.field = [physical, pert](const Point3& p) { return perturbed(physical(p.x, p.y), pert, p.x + p.y); };
    const auto field = fam.field;
    fam.residual = [field, gamma](const Point3& p, double h) {
        const auto rep =
            euler_residual_axisym([&](double z, double r) { return field({z, r, 0.0}); }, p.x, p.y, h, gamma);
        return ResidualSample{rep.max_abs(), rep.max_normalized()};
    };

    const auto span_cfg = cfg.verify.span;
    const double far_end = std::fabs(reduced_axis.hi - start) >= std::fabs(reduced_axis.lo - start) ? reduced_axis.hi
                                                                                                       : reduced_axis.lo;
    fam.integrals = [params, y0, start, far_end, span_cfg, closed](const VerifySettings& settings) {
        std::array<double, 2> span = span_cfg ? *span_cfg : std::array<double, 2>{start, far_end};
        StateVec<4> init = y0;
        if (span[0] != start) {
            if (!closed) throw ConfigError("verify.span must start at params.start for integrated profiles");
            init = (*closed)(span[0]);
        }
        auto rhs = [params](double t, const StateVec<4>& y) {
            return rhs_axisym(params, ReducedStateRZ::from_array(y), t).to_array();
        };
        auto ints = [params](const StateVec<4>& y, double t) {
            return first_integrals_axisym(params, ReducedStateRZ::from_array(y), t);
        };
        return check_integrals<4>(rhs, ints, init, span, settings.step, closed);
    };
    return fam;
}

Family build_threed(const RunConfig& cfg, bool literal_e5) {
    Family fam;
    fam.name = cfg.family;
    ThreeDParams params;
    params.m = required_param(cfg, "m");
    params.n = required_param(cfg, "n");
    params.gamma = required_param(cfg, "gamma");
    params.c4 = param(cfg, "c4", 0.0);
    params.b = param(cfg, "b", 0.0);
    fam.gamma = params.gamma;
    const E5Form e5 = literal_e5 ? E5Form::literal : E5Form::corrected;
    const Axis& zaxis = cfg.grid.axes[2];
    const double margin = 2.0 * max_spacing(cfg);

    std::function<ReducedState3D(double)> profile;
    std::optional<std::function<StateVec<5>(double)>> closed;
    StateVec<5> y0{};
    double start = 0.0;
    const auto init = initial_state(cfg, 5);
    if (init) {
        start = required_param(cfg, "start");
        const ReducedState3D s{(*init)[0], (*init)[1], (*init)[2], (*init)[3], (*init)[4]};
        params.c1 = 1.0;
        params.c2 = 1.0;
        const FirstIntegrals fi = first_integrals_3d(params, s);
        params.c1 = fi.c1;
        params.c2 = fi.c2;
        params.c3 = fi.c3;
        params.validate();
        y0 = s.to_array();
        auto rhs = [params, e5](double t, const StateVec<5>& y) {
            return rhs_3d(params, ReducedState3D::from_array(y), t, e5).to_array();
        };
        auto dense = dense_profile<5>(rhs, y0, start, zaxis.lo - margin, zaxis.hi + margin,
                                      param(cfg, "profile_step", 2.5e-4));
        profile = [dense](double t) { return ReducedState3D::from_array(dense(t)); };
    } else {
        params.c1 = required_param(cfg, "c1");
        params.c2 = required_param(cfg, "c2");
        params.c3 = param(cfg, "c3", 0.0);
        params.validate();
        if (params.c3 != 0.0) throw ConfigError("c3 != 0 has no closed form; supply params.initial and params.start");
        profile = [params](double z) { return reconstruct_3d(params, z); };
        closed = [params](double z) { return reconstruct_3d(params, z).to_array(); };
        start = zaxis.lo;
        y0 = profile(start).to_array();
    }

    const Field3 physical = physical_field_3d(params, profile);
    const auto pert = cfg.perturb;
    fam.field = [physical, pert](const Point3& p) { return perturbed(physical(p), pert, p.x + p.y + p.z); };
    const auto field = fam.field;
    const double gamma = params.gamma;
    fam.residual = [field, gamma](const Point3& p, double h) {
        const auto rep = euler_residual_3d(field, p, h, gamma);
        return ResidualSample{rep.max_abs(), rep.max_normalized()};
    };

    const auto span_cfg = cfg.verify.span;
    const double far_end =
        std::fabs(zaxis.hi - start) >= std::fabs(zaxis.lo - start) ? zaxis.hi : zaxis.lo;
    fam.integrals = [params, e5, y0, start, far_end, span_cfg, closed](const VerifySettings& settings) {
        std::array<double, 2> span = span_cfg ? *span_cfg : std::array<double, 2>{start, far_end};
        StateVec<5> init = y0;
        if (span[0] != start) {
            if (!closed) throw ConfigError("verify.span must start at params.start for integrated profiles");
            init = (*closed)(span[0]);
        }
        auto rhs = [params, e5](double t, const StateVec<5>& y) {
            return rhs_3d(params, ReducedState3D::from_array(y), t, e5).to_array();
        };
        auto ints = [params](const StateVec<5>& y, double) {
            return first_integrals_3d(params, ReducedState3D::from_array(y));
        };
        return check_integrals<5>(rhs, ints, init, span, settings.step, closed);
    };
    return fam;
}

}  // namespace

Family build_family(const RunConfig& cfg, bool literal_e5) {
    if (cfg.family == "chaplygin-implicit" || cfg.family == "chaplygin-rational") return build_chaplygin(cfg);
    if (cfg.is_axisym()) return build_axisym(cfg, literal_e5);
    if (cfg.family == "threed") return build_threed(cfg, literal_e5);
    throw ConfigError("unknown family '" + cfg.family + "'");
}

}  // namespace exactflow::cli

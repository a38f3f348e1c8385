#include "cli/config.hpp"

#include <cmath>
#include <fstream>

#include "exactflow/errors.hpp"

namespace exactflow::cli {

using nlohmann::json;

std::size_t Grid::size() const {
    std::size_t out = 1;
    for (const Axis& a : axes) out *= static_cast<std::size_t>(a.n);
    return out;
}

namespace {

const char* const kFamilies[] = {"chaplygin-implicit", "chaplygin-rational", "axisym-pz", "axisym-pr", "threed"};

double finite_number(const json& j, const std::string& what) {
    if (!j.is_number()) throw ConfigError(what + " must be a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw ConfigError(what + " must be finite");
    return v;
}

Axis parse_axis(const json& j, const std::string& name) {
    if (!j.is_array() || j.size() != 3) throw ConfigError("grid." + name + " must be [lo, hi, n]");
    Axis a;
    a.lo = finite_number(j[0], "grid." + name + "[0]");
    a.hi = finite_number(j[1], "grid." + name + "[1]");
    if (!j[2].is_number_integer()) throw ConfigError("grid." + name + "[2] must be an integer");
    a.n = j[2].get<int>();
    if (a.n < 2) throw ConfigError("grid." + name + ": resolution must be at least 2");
    if (!(a.hi > a.lo)) throw ConfigError("grid." + name + ": hi must exceed lo");
    return a;
}

std::array<double, 2> parse_pair(const json& j, const std::string& what) {
    if (!j.is_array() || j.size() != 2) throw ConfigError(what + " must be [lo, hi]");
    return {finite_number(j[0], what + "[0]"), finite_number(j[1], what + "[1]")};
}

}  // namespace

double param(const RunConfig& cfg, const char* key, double fallback) {
    if (!cfg.params.contains(key)) return fallback;
    return finite_number(cfg.params[key], std::string("params.") + key);
}

double required_param(const RunConfig& cfg, const char* key) {
    if (!cfg.params.contains(key)) throw ConfigError(std::string("params.") + key + " is required");
    return finite_number(cfg.params[key], std::string("params.") + key);
}

RunConfig parse_config(const json& doc) {
    if (!doc.is_object()) throw ConfigError("config must be a JSON object");
    RunConfig cfg;
    cfg.raw = doc;
    if (!doc.contains("family") || !doc["family"].is_string()) throw ConfigError("family is required");
    cfg.family = doc["family"].get<std::string>();
    bool known = false;
    for (const char* f : kFamilies) known = known || cfg.family == f;
    if (!known) throw ConfigError("unknown family '" + cfg.family + "'");

    if (doc.contains("params")) {
        if (!doc["params"].is_object()) throw ConfigError("params must be an object");
        cfg.params = doc["params"];
    }

    if (!doc.contains("grid") || !doc["grid"].is_object()) throw ConfigError("grid is required");
    const json& g = doc["grid"];
    const std::vector<std::string> names =
        cfg.is_axisym() ? std::vector<std::string>{"z", "r"} : std::vector<std::string>{"x", "y", "z"};
    for (const auto& name : names) {
        if (!g.contains(name)) throw ConfigError("grid." + name + " is required");
        cfg.grid.axes.push_back(parse_axis(g[name], name));
    }

    if (doc.contains("verify")) {
        const json& v = doc["verify"];
        if (!v.is_object()) throw ConfigError("verify must be an object");
        if (v.contains("h")) {
            if (!v["h"].is_array() || v["h"].size() < 3) throw ConfigError("verify.h needs at least three spacings");
            cfg.verify.spacings.clear();
            for (const auto& h : v["h"]) {
                const double x = finite_number(h, "verify.h");
                if (!(x > 0.0)) throw ConfigError("verify.h entries must be positive");
                cfg.verify.spacings.push_back(x);
            }
        }
        if (v.contains("slope")) {
            const auto s = parse_pair(v["slope"], "verify.slope");
            cfg.verify.slope_lo = s[0];
            cfg.verify.slope_hi = s[1];
        }
        auto num = [&](const char* key, double& dst) {
            if (v.contains(key)) dst = finite_number(v[key], std::string("verify.") + key);
        };
        num("normalized_tol", cfg.verify.normalized_tol);
        num("integral_tol", cfg.verify.integral_tol);
        num("invariant_tol", cfg.verify.invariant_tol);
        num("sonic_tol", cfg.verify.sonic_tol);
        num("step", cfg.verify.step);
        if (!(cfg.verify.step > 0.0)) throw ConfigError("verify.step must be positive");
        if (v.contains("span")) cfg.verify.span = parse_pair(v["span"], "verify.span");
        if (v.contains("max_points")) cfg.verify.max_points = v["max_points"].get<int>();
        if (v.contains("streamline_seeds")) cfg.verify.streamline_seeds = v["streamline_seeds"].get<int>();
        if (cfg.verify.max_points < 1) throw ConfigError("verify.max_points must be positive");
    }

    if (doc.contains("trace")) {
        const json& t = doc["trace"];
        if (!t.is_object()) throw ConfigError("trace must be an object");
        if (t.contains("span")) {
            const auto s = parse_pair(t["span"], "trace.span");
            cfg.trace.t0 = s[0];
            cfg.trace.t1 = s[1];
        }
        if (t.contains("step")) cfg.trace.step = finite_number(t["step"], "trace.step");
        if (!(cfg.trace.step > 0.0)) throw ConfigError("trace.step must be positive");
        if (t.contains("arclength")) cfg.trace.arclength = t["arclength"].get<bool>();
        if (t.contains("seeds")) {
            for (const auto& s : t["seeds"]) {
                if (!s.is_array() || s.size() < 2 || s.size() > 3) throw ConfigError("trace.seeds entries must be points");
                std::array<double, 3> p{0.0, 0.0, 0.0};
                for (std::size_t i = 0; i < s.size(); ++i) p[i] = finite_number(s[i], "trace.seeds");
                cfg.trace.seeds.push_back(p);
            }
        }
    }

    if (doc.contains("perturb")) {
        const json& p = doc["perturb"];
        if (!p.is_object() || !p.contains("quantity") || !p["quantity"].is_string())
            throw ConfigError("perturb needs a quantity");
        Perturbation pert;
        pert.quantity = p["quantity"].get<std::string>();
        pert.amplitude = p.contains("amplitude") ? finite_number(p["amplitude"], "perturb.amplitude") : 0.1;
        const bool chap = cfg.family.rfind("chaplygin", 0) == 0;
        const bool ok = chap ? pert.quantity == "phi"
                             : (pert.quantity == "u" || pert.quantity == "v" || pert.quantity == "w" ||
                                pert.quantity == "rho" || pert.quantity == "p");
        if (!ok) throw ConfigError("perturb.quantity '" + pert.quantity + "' does not apply to " + cfg.family);
        cfg.perturb = pert;
    }
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config '" + path + "'");
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed config: ") + e.what());
    }
    return parse_config(doc);
}

}  // namespace exactflow::cli

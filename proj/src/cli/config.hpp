#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace exactflow::cli {

struct Axis {
    double lo = 0.0;
    double hi = 1.0;
    int n = 2;

    double at(int i) const { return n == 1 ? lo : lo + (hi - lo) * i / (n - 1); }
    double spacing() const { return n == 1 ? 0.0 : (hi - lo) / (n - 1); }
};

struct Grid {
    // threed / chaplygin: x, y, z. axisym: z, r in axes[0], axes[1].
    std::vector<Axis> axes;
    std::size_t size() const;
};

struct Perturbation {
    std::string quantity;  // u, v, w, rho, p or phi
    double amplitude = 0.0;
};

struct VerifySettings {
    std::vector<double> spacings = {1e-2, 1e-3, 1e-4};
    double slope_lo = 1.8;
    double slope_hi = 2.2;
    double normalized_tol = 1e-6;
    double integral_tol = 1e-8;
    double invariant_tol = 1e-6;
    double sonic_tol = 1e-12;
    std::optional<std::array<double, 2>> span;  // reduced coordinate
    double step = 1e-3;
    int max_points = 27;
    int streamline_seeds = 3;
};

struct TraceSettings {
    double t0 = 0.0;
    double t1 = 0.5;
    double step = 1e-3;
    bool arclength = true;
    std::vector<std::array<double, 3>> seeds;
};

struct RunConfig {
    std::string family;
    nlohmann::json params = nlohmann::json::object();
    nlohmann::json raw;
    Grid grid;
    VerifySettings verify;
    TraceSettings trace;
    std::optional<Perturbation> perturb;

    bool is_axisym() const { return family == "axisym-pz" || family == "axisym-pr"; }
};

// Throws ConfigError with a descriptive message on any invalid field.
RunConfig parse_config(const nlohmann::json& doc);
RunConfig load_config(const std::string& path);

double param(const RunConfig& cfg, const char* key, double fallback);
double required_param(const RunConfig& cfg, const char* key);

}  // namespace exactflow::cli

#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cli/config.hpp"
#include "exactflow/core.hpp"

namespace exactflow::cli {

struct IntegralCheck {
    std::vector<std::pair<std::string, double>> drift;
    std::optional<double> closed_form_error;
    std::string termination;
    std::array<double, 2> span{};
    std::size_t steps = 0;
};

struct ResidualSample {
    double magnitude = 0.0;
    double normalized = 0.0;
};

struct Family {
    std::string name;
    bool axisym = false;
    bool chaplygin = false;
    double gamma = 0.0;
    std::optional<GasLaw> law;
    // Axisymmetric families take (z, r, 0).
    std::function<FlowState(const Point3&)> field;
    std::function<ResidualSample(const Point3&, double h)> residual;
    // Empty for the Chaplygin families.
    std::function<IntegralCheck(const VerifySettings&)> integrals;
};

Family build_family(const RunConfig& cfg, bool literal_e5);

// Grid point for a linear index; x (or r) varies fastest, z slowest.
Point3 grid_point(const RunConfig& cfg, std::size_t index);

}  // namespace exactflow::cli

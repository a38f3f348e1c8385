#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "exactflow/core.hpp"

namespace exactflow {

struct ResidualReport {
    std::vector<std::string> labels;
    std::vector<double> residuals;  // signed
    std::vector<double> scales;     // largest constituent term per equation
    double h = 0.0;
    Point3 point;

    double magnitude(std::size_t i) const;
    double normalized(std::size_t i) const;
    double max_abs() const;
    double max_normalized() const;
};

using FieldSampler3 = std::function<FlowState(const Point3&)>;
using FieldSamplerRZ = std::function<FlowState(double z, double r)>;

// Continuity, three momentum components and the pressure equation of the
// stationary adiabatic Euler system, second-order central differences.
ResidualReport euler_residual_3d(const FieldSampler3& field, const Point3& pt, double h, double gamma);

// Axisymmetric system in (z, r) with velocity (u, v) = (axial, radial); the
// FlowState w component is ignored. pt = (z, r, unused).
ResidualReport euler_residual_axisym(const FieldSamplerRZ& field, double z, double r, double h, double gamma);

struct ConvergenceResult {
    std::optional<double> slope;  // empty when saturated
    bool saturated = false;
    std::vector<double> hs;
    std::vector<double> residuals;
};

inline constexpr double kSaturationFloor = 1e2 * 2.220446049250313e-16;

// Least-squares slope of log(residual(h)) against log(h). Saturated when any
// residual falls below kSaturationFloor.
ConvergenceResult convergence_order(const std::function<double(double)>& residual_at, std::span<const double> hs);

inline constexpr double kDefaultSpacings[] = {1e-2, 1e-3, 1e-4};

struct InvariantDrift {
    double entropy = 0.0;
    double bernoulli = 0.0;
    double max() const { return entropy > bernoulli ? entropy : bernoulli; }
};

// Max relative deviation of I1 = p / rho^gamma and I2 = |u|^2/2 + gamma p /((gamma-1) rho)
// from their mean over the samples.
InvariantDrift invariants_along_curve(const FieldSampler3& field, std::span<const Point3> curve, double gamma);
InvariantDrift invariants_along_curve(std::span<const FlowState> states, double gamma);

}  // namespace exactflow

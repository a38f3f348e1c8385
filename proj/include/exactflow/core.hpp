#pragma once

#include <cmath>
#include <string>

#include "exactflow/errors.hpp"

namespace exactflow {

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    constexpr double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
    constexpr double& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }

    friend constexpr Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
    friend constexpr Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
    friend constexpr Vec3 operator*(double s, Vec3 a) { return {s * a.x, s * a.y, s * a.z}; }
    friend constexpr Vec3 operator*(Vec3 a, double s) { return s * a; }
    friend constexpr Vec3 operator/(Vec3 a, double s) { return {a.x / s, a.y / s, a.z / s}; }
    friend constexpr bool operator==(Vec3, Vec3) = default;
};

using Point3 = Vec3;

inline double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline double norm(Vec3 a) { return std::sqrt(dot(a, a)); }
inline bool is_finite(Vec3 a) {
    return std::isfinite(a.x) && std::isfinite(a.y) && std::isfinite(a.z);
}

// Unit vector along axis 0, 1 or 2.
constexpr Vec3 axis(int i) {
    return {i == 0 ? 1.0 : 0.0, i == 1 ? 1.0 : 0.0, i == 2 ? 1.0 : 0.0};
}

// Velocity, density and pressure at one point. Validated once at
// construction: all components finite, rho > 0.
class FlowState {
public:
    FlowState(double u, double v, double w, double rho, double p);

    double u() const { return u_; }
    double v() const { return v_; }
    double w() const { return w_; }
    double rho() const { return rho_; }
    double p() const { return p_; }
    Vec3 velocity() const { return {u_, v_, w_}; }
    double speed_squared() const { return u_ * u_ + v_ * v_ + w_ * w_; }

private:
    double u_, v_, w_, rho_, p_;
};

class GasLaw {
public:
    enum class Kind { polytropic, chaplygin };

    static GasLaw polytropic(double gamma);
    // Chaplygin state law p = -a/rho + b.
    static GasLaw chaplygin(double a, double b);

    Kind kind() const { return kind_; }
    double gamma() const { return gamma_; }
    double a() const { return a_; }
    double b() const { return b_; }

    // Pressure from density; only meaningful for the Chaplygin law.
    double chaplygin_pressure(double rho) const { return -a_ / rho + b_; }

private:
    GasLaw(Kind kind, double gamma, double a, double b) : kind_(kind), gamma_(gamma), a_(a), b_(b) {}

    Kind kind_;
    double gamma_;
    double a_;
    double b_;
};

// c^2 = gamma p / rho (polytropic) or a / rho^2 (Chaplygin).
double sound_speed_squared(const GasLaw& law, const FlowState& state);

// I1 = p / rho^gamma.
double entropy_invariant(double gamma, const FlowState& state);

// I2 = |u|^2 / 2 + gamma p / ((gamma - 1) rho).
double bernoulli_invariant(double gamma, const FlowState& state);

// Throws DomainError unless gamma > 1 and finite.
void require_polytropic_gamma(double gamma);

// Real power of a strictly positive base; throws DomainError naming `what`
// otherwise.
double positive_pow(double base, double exponent, const char* what);

// sgn(t) |t|^e, the real extension of t^e used for first-integral terms that
// come from integrating logarithmic derivatives.
inline double signed_pow(double t, double e) {
    return std::copysign(std::pow(std::fabs(t), e), t);
}

}  // namespace exactflow

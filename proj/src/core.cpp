#include "exactflow/core.hpp"

#include <sstream>

namespace exactflow {

FlowState::FlowState(double u, double v, double w, double rho, double p)
    : u_(u), v_(v), w_(w), rho_(rho), p_(p) {
    if (!(std::isfinite(u) && std::isfinite(v) && std::isfinite(w) && std::isfinite(rho) &&
          std::isfinite(p))) {
        throw DomainError("FlowState: non-finite component");
    }
    if (!(rho > 0.0)) {
        std::ostringstream msg;
        msg << "FlowState: density must be positive, got " << rho;
        throw DomainError(msg.str());
    }
}

GasLaw GasLaw::polytropic(double gamma) {
    require_polytropic_gamma(gamma);
    return GasLaw(Kind::polytropic, gamma, 0.0, 0.0);
}

GasLaw GasLaw::chaplygin(double a, double b) {
    if (!(std::isfinite(a) && a > 0.0) || !std::isfinite(b)) {
        throw DomainError("GasLaw::chaplygin: requires finite a > 0 and finite b");
    }
    return GasLaw(Kind::chaplygin, -1.0, a, b);
}

void require_polytropic_gamma(double gamma) {
    if (!(std::isfinite(gamma) && gamma > 1.0)) {
        std::ostringstream msg;
        msg << "adiabatic index must satisfy gamma > 1, got " << gamma;
        throw DomainError(msg.str());
    }
}

double positive_pow(double base, double exponent, const char* what) {
    if (!(base > 0.0) || !std::isfinite(base)) {
        std::ostringstream msg;
        msg << what << ": power base must be positive, got " << base;
        throw DomainError(msg.str());
    }
    return std::pow(base, exponent);
}

double sound_speed_squared(const GasLaw& law, const FlowState& state) {
    const double c2 = law.kind() == GasLaw::Kind::polytropic
                          ? law.gamma() * state.p() / state.rho()
                          : law.a() / (state.rho() * state.rho());
    if (!std::isfinite(c2)) throw DomainError("sound_speed_squared: non-finite result");
    return c2;
}

double entropy_invariant(double gamma, const FlowState& state) {
    if (!(state.rho() > 0.0)) throw DomainError("entropy_invariant: rho must be positive");
    return state.p() / std::pow(state.rho(), gamma);
}

double bernoulli_invariant(double gamma, const FlowState& state) {
    if (gamma == 1.0) throw DomainError("bernoulli_invariant: gamma = 1 (isothermal) is not supported");
    if (!(state.rho() > 0.0)) throw DomainError("bernoulli_invariant: rho must be positive");
    return 0.5 * state.speed_squared() + gamma * state.p() / ((gamma - 1.0) * state.rho());
}

}  // namespace exactflow

#include "seqnca/optim.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace seqnca {

namespace {

void check_sizes(const char* who, std::size_t params, std::size_t grads, std::size_t state) {
    if (params != grads || params != state)
        throw std::invalid_argument(std::string(who) + ": size mismatch (params " +
                                    std::to_string(params) + ", grads " +
                                    std::to_string(grads) + ", state " +
                                    std::to_string(state) + ")");
}

double sign(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

}  // namespace

const char* to_string(OptimizerKind kind) {
    return kind == OptimizerKind::sgd ? "sgd" : "rprop";
}

OptimizerKind optimizer_from_string(std::string_view name) {
    if (name == "sgd") return OptimizerKind::sgd;
    if (name == "rprop") return OptimizerKind::rprop;
    throw std::invalid_argument("unknown optimizer: " + std::string(name));
}

void sgd_step(std::span<double> params, std::span<const double> grads, SgdState& state) {
    check_sizes("sgd_step", params.size(), grads.size(), state.velocity.size());
    const double mu = state.config.momentum;
    const double eta = state.config.learning_rate;
    for (std::size_t i = 0; i < params.size(); ++i) {
        state.velocity[i] = mu * state.velocity[i] + eta * grads[i];
        params[i] += state.velocity[i];
    }
}

void rprop_step(std::span<double> params, std::span<const double> grads, RpropState& state) {
    check_sizes("rprop_step", params.size(), grads.size(), state.delta.size());
    const RpropConfig& cfg = state.config;
    for (std::size_t i = 0; i < params.size(); ++i) {
        double g = grads[i];
        const double prod = g * state.prev_sign[i];
        if (prod > 0.0) {
            state.delta[i] = std::min(state.delta[i] * cfg.eta_plus, cfg.delta_max);
        } else if (prod < 0.0) {
            state.delta[i] = std::max(state.delta[i] * cfg.eta_minus, cfg.delta_min);
            g = 0.0;  // sign flip: shrink the step and sit this one out
        }
        params[i] += sign(g) * state.delta[i];
        state.prev_sign[i] = sign(g);
    }
}

void Optimizer::step(std::span<double> params, std::span<const double> grads) {
    if (auto* s = std::get_if<SgdState>(&state_))
        sgd_step(params, grads, *s);
    else
        rprop_step(params, grads, std::get<RpropState>(state_));
}

}  // namespace seqnca

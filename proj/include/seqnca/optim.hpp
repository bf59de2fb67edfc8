#pragma once

#include <span>
#include <string_view>
#include <variant>

#include "seqnca/matrix.hpp"

namespace seqnca {

enum class OptimizerKind { sgd, rprop };

const char* to_string(OptimizerKind kind);
OptimizerKind optimizer_from_string(std::string_view name);

/// Both optimizers take ascent directions: a step moves parameters towards
/// larger objective values.

struct SgdConfig {
    double learning_rate = 0.01;
    double momentum = 0.9;
};

struct SgdState {
    SgdConfig config;
    Vector velocity;

    SgdState(std::size_t n, SgdConfig cfg) : config(cfg), velocity(n, 0.0) {}
};

/// v <- mu v + eta g;  params <- params + v
void sgd_step(std::span<double> params, std::span<const double> grads, SgdState& state);

struct RpropConfig {
    double eta_plus = 1.2;
    double eta_minus = 0.5;
    double delta0 = 0.01;
    double delta_min = 1e-6;
    double delta_max = 1.0;
};

struct RpropState {
    RpropConfig config;
    Vector delta;      // per-parameter step size, kept in [delta_min, delta_max]
    Vector prev_sign;  // sign of the previous accepted gradient (-1, 0, +1)

    RpropState(std::size_t n, RpropConfig cfg)
        : config(cfg), delta(n, cfg.delta0), prev_sign(n, 0.0) {}
};

/// iRprop- update: grow the step on a repeated gradient sign, shrink it and
/// skip the move on a sign flip. Only gradient signs matter, so the
/// trajectory is invariant to positive gradient rescaling.
void rprop_step(std::span<double> params, std::span<const double> grads, RpropState& state);

/// Kind-erased wrapper used by the training loop.
class Optimizer {
public:
    static Optimizer sgd(std::size_t n, SgdConfig cfg) { return Optimizer(SgdState(n, cfg)); }
    static Optimizer rprop(std::size_t n, RpropConfig cfg) {
        return Optimizer(RpropState(n, cfg));
    }

    void step(std::span<double> params, std::span<const double> grads);

private:
    explicit Optimizer(std::variant<SgdState, RpropState> state) : state_(std::move(state)) {}
    std::variant<SgdState, RpropState> state_;
};

}  // namespace seqnca

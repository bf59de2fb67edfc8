#include "seqnca/pooling.hpp"

#include <stdexcept>
#include <string>

namespace seqnca {

namespace {

void check_nonempty(const char* who, const std::vector<Vector>& outputs) {
    if (outputs.empty()) throw std::invalid_argument(std::string(who) + ": empty sequence");
}

}  // namespace

const char* to_string(PoolKind kind) {
    switch (kind) {
        case PoolKind::sum: return "sum";
        case PoolKind::mean: return "mean";
        case PoolKind::max: return "max";
    }
    return "?";
}

PoolKind pool_from_string(std::string_view name) {
    if (name == "sum") return PoolKind::sum;
    if (name == "mean") return PoolKind::mean;
    if (name == "max") return PoolKind::max;
    throw std::invalid_argument("unknown pooling operator: " + std::string(name));
}

Vector pool(PoolKind kind, const std::vector<Vector>& outputs) {
    check_nonempty("pool", outputs);
    const std::size_t m = outputs.front().size();
    Vector e = outputs.front();
    switch (kind) {
        case PoolKind::sum:
        case PoolKind::mean:
            for (std::size_t t = 1; t < outputs.size(); ++t)
                for (std::size_t j = 0; j < m; ++j) e[j] += outputs[t][j];
            if (kind == PoolKind::mean) {
                const double T = static_cast<double>(outputs.size());
                for (double& v : e) v /= T;
            }
            break;
        case PoolKind::max:
            for (std::size_t t = 1; t < outputs.size(); ++t)
                for (std::size_t j = 0; j < m; ++j)
                    if (outputs[t][j] > e[j]) e[j] = outputs[t][j];
            break;
    }
    return e;
}

std::vector<Vector> pool_backward(PoolKind kind, const std::vector<Vector>& outputs,
                                  const Vector& pooled_grad) {
    check_nonempty("pool_backward", outputs);
    const std::size_t steps = outputs.size();
    const std::size_t m = pooled_grad.size();
    std::vector<Vector> grads(steps, Vector(m, 0.0));

    switch (kind) {
        case PoolKind::sum:
            for (auto& g : grads) g = pooled_grad;
            break;
        case PoolKind::mean: {
            Vector share = pooled_grad;
            for (double& v : share) v /= static_cast<double>(steps);
            for (auto& g : grads) g = share;
            break;
        }
        case PoolKind::max:
            // earliest attaining timestep takes the whole gradient per component
            for (std::size_t j = 0; j < m; ++j) {
                std::size_t best = 0;
                for (std::size_t t = 1; t < steps; ++t)
                    if (outputs[t][j] > outputs[best][j]) best = t;
                grads[best][j] = pooled_grad[j];
            }
            break;
    }
    return grads;
}

}  // namespace seqnca

#pragma once

#include <string_view>
#include <vector>

#include "seqnca/matrix.hpp"

namespace seqnca {

enum class PoolKind { sum, mean, max };

const char* to_string(PoolKind kind);
PoolKind pool_from_string(std::string_view name);

/// Reduce a nonempty sequence of m-vectors to a single m-vector.
Vector pool(PoolKind kind, const std::vector<Vector>& outputs);

/// Distribute a gradient on the pooled vector back over the timesteps.
/// sum: replicate; mean: replicate grad/T; max: route each component to the
/// earliest timestep attaining the maximum, zero elsewhere.
std::vector<Vector> pool_backward(PoolKind kind, const std::vector<Vector>& outputs,
                                  const Vector& pooled_grad);

}  // namespace seqnca

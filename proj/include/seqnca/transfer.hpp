#pragma once

#include <span>
#include <string_view>

#include "seqnca/matrix.hpp"

namespace seqnca {

enum class Transfer { sigmoid, tanh, relu };

const char* to_string(Transfer kind);
Transfer transfer_from_string(std::string_view name);

/// Numerically safe logistic function: never NaN, saturates to 0/1.
double sigmoid(double x);

/// Elementwise transfer function application.
Vector transfer(Transfer kind, std::span<const double> x);

/// Elementwise derivative. For sigmoid and tanh the argument is the
/// activation *output* y (derivatives y(1-y) and 1-y^2); for relu it is the
/// pre-activation x, with subgradient 0 at x == 0.
Vector transfer_deriv(Transfer kind, std::span<const double> y_or_x);

}  // namespace seqnca

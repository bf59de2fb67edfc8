#include "seqnca/transfer.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace seqnca {

const char* to_string(Transfer kind) {
    switch (kind) {
        case Transfer::sigmoid: return "sigmoid";
        case Transfer::tanh: return "tanh";
        case Transfer::relu: return "relu";
    }
    return "?";
}

Transfer transfer_from_string(std::string_view name) {
    if (name == "sigmoid") return Transfer::sigmoid;
    if (name == "tanh") return Transfer::tanh;
    if (name == "relu") return Transfer::relu;
    throw std::invalid_argument("unknown transfer function: " + std::string(name));
}

double sigmoid(double x) {
    // split on sign so the exp argument is always <= 0
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

Vector transfer(Transfer kind, std::span<const double> x) {
    Vector y(x.size());
    switch (kind) {
        case Transfer::sigmoid:
            for (std::size_t i = 0; i < x.size(); ++i) y[i] = sigmoid(x[i]);
            break;
        case Transfer::tanh:
            for (std::size_t i = 0; i < x.size(); ++i) y[i] = std::tanh(x[i]);
            break;
        case Transfer::relu:
            for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] > 0.0 ? x[i] : 0.0;
            break;
    }
    return y;
}

Vector transfer_deriv(Transfer kind, std::span<const double> y_or_x) {
    Vector d(y_or_x.size());
    switch (kind) {
        case Transfer::sigmoid:
            for (std::size_t i = 0; i < d.size(); ++i) {
                const double y = y_or_x[i];
                d[i] = y * (1.0 - y);
            }
            break;
        case Transfer::tanh:
            for (std::size_t i = 0; i < d.size(); ++i) {
                const double y = y_or_x[i];
                d[i] = 1.0 - y * y;
            }
            break;
        case Transfer::relu:
            for (std::size_t i = 0; i < d.size(); ++i) d[i] = y_or_x[i] > 0.0 ? 1.0 : 0.0;
            break;
    }
    return d;
}

}  // namespace seqnca

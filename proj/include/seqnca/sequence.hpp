#pragma once

#include <span>
#include <utility>

#include "seqnca/matrix.hpp"

namespace seqnca {

/// A variable-length sequence of real vectors, stored as a T x n matrix
/// (one timestep per row).
struct Sequence {
    Matrix values;

    Sequence() = default;
    explicit Sequence(Matrix m) : values(std::move(m)) {}

    /// Univariate convenience constructor (n = 1).
    static Sequence univariate(const Vector& v) {
        Matrix m(v.size(), 1);
        for (std::size_t t = 0; t < v.size(); ++t) m(t, 0) = v[t];
        return Sequence(m);
    }

    std::size_t length() const { return values.rows(); }
    std::size_t dim() const { return values.cols(); }
    std::span<const double> step(std::size_t t) const { return values.row(t); }
};

}  // namespace seqnca

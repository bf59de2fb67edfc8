#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace seqnca {

using Vector = std::vector<double>;

/// Dense row-major matrix of doubles. All shapes in this library are small
/// (at most a few thousand rows), so there is no sparse or blocked storage.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double value = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, value) {}

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
    std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

    std::vector<double>& flat() { return data_; }
    const std::vector<double>& flat() const { return data_; }

    void fill(double v) { data_.assign(data_.size(), v); }

    bool operator==(const Matrix& other) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// y = W x + b. Throws std::invalid_argument on shape mismatch, naming both
/// shapes in the message.
Vector affine(const Matrix& w, std::span<const double> x, std::span<const double> b);

/// y = W x.
Vector matvec(const Matrix& w, std::span<const double> x);

/// y = W^T x, the adjoint map used when propagating deltas backwards.
Vector affine_transposed(const Matrix& w, std::span<const double> x);

/// acc += a b^T (outer-product accumulation for weight gradients).
void add_outer(Matrix& acc, std::span<const double> a, std::span<const double> b);

/// acc += v, elementwise.
void add_into(std::span<double> acc, std::span<const double> v);

double dot(std::span<const double> a, std::span<const double> b);
double squared_norm(std::span<const double> v);
bool all_finite(std::span<const double> v);

}  // namespace seqnca

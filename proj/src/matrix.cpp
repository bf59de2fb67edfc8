#include "seqnca/matrix.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace seqnca {

namespace {

[[noreturn]] void shape_error(const char* what, std::size_t wr, std::size_t wc,
                              std::size_t xn, std::size_t bn) {
    std::ostringstream os;
    os << what << ": W is " << wr << "x" << wc << ", x has length " << xn;
    if (bn != static_cast<std::size_t>(-1)) os << ", b has length " << bn;
    throw std::invalid_argument(os.str());
}

}  // namespace

Vector affine(const Matrix& w, std::span<const double> x, std::span<const double> b) {
    if (w.cols() != x.size() || w.rows() != b.size())
        shape_error("affine shape mismatch", w.rows(), w.cols(), x.size(), b.size());
    Vector y(b.begin(), b.end());
    for (std::size_t r = 0; r < w.rows(); ++r) {
        const auto row = w.row(r);
        double acc = 0.0;
        for (std::size_t c = 0; c < row.size(); ++c) acc += row[c] * x[c];
        y[r] += acc;
    }
    return y;
}

Vector matvec(const Matrix& w, std::span<const double> x) {
    if (w.cols() != x.size())
        shape_error("matvec shape mismatch", w.rows(), w.cols(), x.size(),
                    static_cast<std::size_t>(-1));
    Vector y(w.rows(), 0.0);
    for (std::size_t r = 0; r < w.rows(); ++r) {
        const auto row = w.row(r);
        double acc = 0.0;
        for (std::size_t c = 0; c < row.size(); ++c) acc += row[c] * x[c];
        y[r] = acc;
    }
    return y;
}

Vector affine_transposed(const Matrix& w, std::span<const double> x) {
    if (w.rows() != x.size())
        shape_error("affine_transposed shape mismatch", w.rows(), w.cols(), x.size(),
                    static_cast<std::size_t>(-1));
    Vector y(w.cols(), 0.0);
    for (std::size_t r = 0; r < w.rows(); ++r) {
        const auto row = w.row(r);
        const double xr = x[r];
        for (std::size_t c = 0; c < row.size(); ++c) y[c] += row[c] * xr;
    }
    return y;
}

void add_outer(Matrix& acc, std::span<const double> a, std::span<const double> b) {
    if (acc.rows() != a.size() || acc.cols() != b.size())
        shape_error("add_outer shape mismatch", acc.rows(), acc.cols(), a.size(), b.size());
    for (std::size_t r = 0; r < a.size(); ++r) {
        auto row = acc.row(r);
        const double ar = a[r];
        for (std::size_t c = 0; c < b.size(); ++c) row[c] += ar * b[c];
    }
}

void add_into(std::span<double> acc, std::span<const double> v) {
    if (acc.size() != v.size())
        throw std::invalid_argument("add_into: length " + std::to_string(acc.size()) +
                                    " vs " + std::to_string(v.size()));
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += v[i];
}

double dot(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size())
        throw std::invalid_argument("dot: length " + std::to_string(a.size()) + " vs " +
                                    std::to_string(b.size()));
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

double squared_norm(std::span<const double> v) {
    double acc = 0.0;
    for (double x : v) acc += x * x;
    return acc;
}

bool all_finite(std::span<const double> v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

}  // namespace seqnca

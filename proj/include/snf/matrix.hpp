#pragma once

#include <cstddef>
#include <vector>

#include "snf/errors.hpp"

namespace snf {

// Dense row-major matrix of doubles. All arithmetic in this project runs on
// 64-bit floats with a fixed accumulation order, so results are reproducible
// bit for bit between runs with the same inputs.
class Matrix {
public:
    Matrix() = default;
    Matrix(int rows, int cols) : rows_(rows), cols_(cols), d_(size_t(rows) * cols, 0.0) {
        if (rows < 0 || cols < 0) throw ArgumentError("Matrix: negative dimension");
    }
    Matrix(int rows, int cols, std::vector<double> data) : rows_(rows), cols_(cols), d_(std::move(data)) {
        if (d_.size() != size_t(rows) * cols) throw ShapeError("Matrix: data length != rows*cols");
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    size_t size() const { return d_.size(); }

    double& operator()(int r, int c) { return d_[size_t(r) * cols_ + c]; }
    double operator()(int r, int c) const { return d_[size_t(r) * cols_ + c]; }

    double* data() { return d_.data(); }
    const double* data() const { return d_.data(); }
    double* row(int r) { return d_.data() + size_t(r) * cols_; }
    const double* row(int r) const { return d_.data() + size_t(r) * cols_; }

    bool same_shape(const Matrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }

    void fill(double v) { std::fill(d_.begin(), d_.end(), v); }

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> d_;
};

// C = A * B. Row-major ikj loop order; the accumulation order of every output
// element is fixed (ascending k), independent of call site.
Matrix matmul(const Matrix& a, const Matrix& b);

// C += A * B, same ordering contract as matmul.
void add_matmul(Matrix& c, const Matrix& a, const Matrix& b);

// C += A^T * B where A and B share the row count. Accumulates over rows of A
// in ascending order; used for weight gradients without forming transposes.
void add_matmul_tn(Matrix& c, const Matrix& a, const Matrix& b);

Matrix transpose(const Matrix& a);

}  // namespace snf

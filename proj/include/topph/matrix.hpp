#ifndef TOPPH_MATRIX_HPP
#define TOPPH_MATRIX_HPP

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace topph {

/// Dense row-major matrix of doubles.
class Matrix {
public:
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {
        if (rows == 0 || cols == 0) {
            throw std::invalid_argument("Matrix: dimensions must be positive");
        }
    }

    Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
        : rows_(rows), cols_(cols), data_(std::move(data)) {
        if (rows == 0 || cols == 0 || data_.size() != rows * cols) {
            throw std::invalid_argument("Matrix: data size does not match dimensions");
        }
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }

    std::span<const double> row(std::size_t i) const {
        return {data_.data() + i * cols_, cols_};
    }

    std::vector<double> column(std::size_t j) const {
        std::vector<double> c(rows_);
        for (std::size_t i = 0; i < rows_; ++i) c[i] = data_[i * cols_ + j];
        return c;
    }

    void set_column(std::size_t j, std::span<const double> c) {
        if (c.size() != rows_) {
            throw std::invalid_argument("Matrix::set_column: size mismatch");
        }
        for (std::size_t i = 0; i < rows_; ++i) data_[i * cols_ + j] = c[i];
    }

    const std::vector<double>& data() const { return data_; }

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    /// m * v, the plain dense product. Four independent accumulators per
    /// row so the reduction vectorizes without -ffast-math.
    std::vector<double> multiply(std::span<const double> v) const {
        if (v.size() != cols_) {
            throw std::invalid_argument("Matrix::multiply: dimension mismatch");
        }
        std::vector<double> out(rows_, 0.0);
        const std::size_t tail = cols_ % 4;
        const std::size_t main = cols_ - tail;
        for (std::size_t i = 0; i < rows_; ++i) {
            const double* r = data_.data() + i * cols_;
            double a0 = 0.0, a1 = 0.0, a2 = 0.0, a3 = 0.0;
            for (std::size_t j = 0; j < main; j += 4) {
                a0 += r[j] * v[j];
                a1 += r[j + 1] * v[j + 1];
                a2 += r[j + 2] * v[j + 2];
                a3 += r[j + 3] * v[j + 3];
            }
            for (std::size_t j = main; j < cols_; ++j) a0 += r[j] * v[j];
            out[i] = (a0 + a1) + (a2 + a3);
        }
        return out;
    }

    bool operator==(const Matrix& other) const = default;

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<double> data_;
};

}  // namespace topph

#endif  // TOPPH_MATRIX_HPP

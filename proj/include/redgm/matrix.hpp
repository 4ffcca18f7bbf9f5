#pragma once

#include <cassert>
#include <cstddef>
#include <vector>

namespace redgm {

/// Row-major dense matrix. Used for the small subset-sized blocks; the large
/// network is only ever touched through sparse operators.
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols, double value = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, value) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t i, std::size_t j) {
        assert(i < rows_ && j < cols_);
        return data_[i * cols_ + j];
    }
    double operator()(std::size_t i, std::size_t j) const {
        assert(i < rows_ && j < cols_);
        return data_[i * cols_ + j];
    }

    std::vector<double>& data() { return data_; }
    const std::vector<double>& data() const { return data_; }

    // Compensated summation: these feed stochasticity diagnostics, so the
    // accumulation itself must not dominate the measured error.
    double sum() const {
        double s = 0.0, c = 0.0;
        for (double v : data_) {
            double y = v - c;
            double t = s + y;
            c = (t - s) - y;
            s = t;
        }
        return s;
    }

    double column_sum(std::size_t j) const {
        double s = 0.0, c = 0.0;
        for (std::size_t i = 0; i < rows_; ++i) {
            double y = (*this)(i, j) - c;
            double t = s + y;
            c = (t - s) - y;
            s = t;
        }
        return s;
    }

    DenseMatrix transposed() const {
        DenseMatrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    bool same_shape(const DenseMatrix& other) const {
        return rows_ == other.rows_ && cols_ == other.cols_;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

} // namespace redgm

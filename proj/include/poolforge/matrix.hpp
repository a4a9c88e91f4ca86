#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "poolforge/error.hpp"

namespace poolforge {

/// Dense row-major matrix. Rows are exposed as spans so kernels never
/// touch raw pointers.
template <typename T>
class BasicMatrix {
public:
    using value_type = T;

    BasicMatrix() = default;
    BasicMatrix(std::size_t rows, std::size_t cols, T fill = T{})
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
    BasicMatrix(std::size_t rows, std::size_t cols, std::vector<T> data)
        : rows_(rows), cols_(cols), data_(std::move(data)) {
        require(data_.size() == rows_ * cols_, ErrorCode::dimension_mismatch, "matrix payload size");
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }

    T& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
    const T& operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

    std::span<T> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }
    std::span<const T> row(std::size_t r) const noexcept { return {data_.data() + r * cols_, cols_}; }

    std::span<T> values() noexcept { return data_; }
    std::span<const T> values() const noexcept { return data_; }

    bool operator==(const BasicMatrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

using Matrix = BasicMatrix<double>;
using FloatMatrix = BasicMatrix<float>;

/// Widen a float matrix to 64-bit for computation.
Matrix widen(const FloatMatrix& m);

/// Copy the listed rows, in order.
template <typename T>
BasicMatrix<T> gather_rows(const BasicMatrix<T>& m, std::span<const std::size_t> indices) {
    BasicMatrix<T> out(indices.size(), m.cols());
    for (std::size_t i = 0; i < indices.size(); ++i) {
        require(indices[i] < m.rows(), ErrorCode::index_out_of_range, "gather_rows");
        auto src = m.row(indices[i]);
        std::copy(src.begin(), src.end(), out.row(i).begin());
    }
    return out;
}

bool all_finite(std::span<const double> values);
bool all_finite(std::span<const float> values);

}  // namespace poolforge

#pragma once

#include <cstddef>
#include <span>

#include "poolforge/matrix.hpp"

// Data-parallel inner loops. Every kernel exists twice: an OpenMP version in
// `kernels::omp` used by the library and a plain loop in `kernels::serial`
// kept as the reference for tests and benchmarks. Each output element is
// produced by one thread with the same summation order as the serial loop,
// so both versions agree bit for bit.
namespace poolforge::kernels {

namespace serial {

/// out(i, j) = bias[j] + sum_k in(i, k) * weight(j, k)
void dense_forward(const Matrix& in, const Matrix& weight, std::span<const double> bias, Matrix& out);
/// grad_weight(j, k) = sum_i grad_out(i, j) * in(i, k); grad_bias[j] = sum_i grad_out(i, j)
void dense_weight_grad(const Matrix& grad_out, const Matrix& in, Matrix& grad_weight, std::span<double> grad_bias);
/// grad_in(i, k) = sum_j grad_out(i, j) * weight(j, k)
void dense_input_grad(const Matrix& grad_out, const Matrix& weight, Matrix& grad_in);
/// Row-wise softmax with max subtraction, in place.
void softmax_rows(Matrix& logits);
/// scores[i] = -sum_k p(i, k) ln p(i, k), with 0 ln 0 = 0.
void row_entropy(const Matrix& proba, std::span<double> scores);
/// scores[i] = min_k |values(i, k)|
void row_min_abs(const Matrix& values, std::span<double> scores);
/// min_dist[t] = min(min_dist[t], ||points(rows[t]) - center||_2)
void update_min_dist(const Matrix& points, std::span<const std::size_t> rows, std::span<const double> center,
                     std::span<double> min_dist);

}  // namespace serial

namespace omp {

void dense_forward(const Matrix& in, const Matrix& weight, std::span<const double> bias, Matrix& out);
void dense_weight_grad(const Matrix& grad_out, const Matrix& in, Matrix& grad_weight, std::span<double> grad_bias);
void dense_input_grad(const Matrix& grad_out, const Matrix& weight, Matrix& grad_in);
void softmax_rows(Matrix& logits);
void row_entropy(const Matrix& proba, std::span<double> scores);
void row_min_abs(const Matrix& values, std::span<double> scores);
void update_min_dist(const Matrix& points, std::span<const std::size_t> rows, std::span<const double> center,
                     std::span<double> min_dist);

}  // namespace omp

using omp::dense_forward;
using omp::dense_input_grad;
using omp::dense_weight_grad;
using omp::row_entropy;
using omp::row_min_abs;
using omp::softmax_rows;
using omp::update_min_dist;

}  // namespace poolforge::kernels

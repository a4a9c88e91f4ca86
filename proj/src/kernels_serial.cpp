#include <algorithm>
#include <cmath>
#include <limits>

#include "poolforge/kernels.hpp"

namespace poolforge::kernels::serial {

void dense_forward(const Matrix& in, const Matrix& weight, std::span<const double> bias, Matrix& out) {
    for (std::size_t i = 0; i < in.rows(); ++i) {
        for (std::size_t j = 0; j < weight.rows(); ++j) {
            double acc = bias[j];
            for (std::size_t k = 0; k < in.cols(); ++k) acc += in(i, k) * weight(j, k);
            out(i, j) = acc;
        }
    }
}

void dense_weight_grad(const Matrix& grad_out, const Matrix& in, Matrix& grad_weight, std::span<double> grad_bias) {
    for (std::size_t j = 0; j < grad_out.cols(); ++j) {
        for (std::size_t k = 0; k < in.cols(); ++k) {
            double acc = 0.0;
            for (std::size_t i = 0; i < in.rows(); ++i) acc += grad_out(i, j) * in(i, k);
            grad_weight(j, k) = acc;
        }
        double acc = 0.0;
        for (std::size_t i = 0; i < grad_out.rows(); ++i) acc += grad_out(i, j);
        grad_bias[j] = acc;
    }
}

void dense_input_grad(const Matrix& grad_out, const Matrix& weight, Matrix& grad_in) {
    for (std::size_t i = 0; i < grad_out.rows(); ++i) {
        for (std::size_t k = 0; k < weight.cols(); ++k) {
            double acc = 0.0;
            for (std::size_t j = 0; j < weight.rows(); ++j) acc += grad_out(i, j) * weight(j, k);
            grad_in(i, k) = acc;
        }
    }
}

void softmax_rows(Matrix& logits) {
    for (std::size_t i = 0; i < logits.rows(); ++i) {
        auto row = logits.row(i);
        double peak = -std::numeric_limits<double>::infinity();
        for (double v : row) peak = std::max(peak, v);
        double total = 0.0;
        for (double& v : row) {
            v = std::exp(v - peak);
            total += v;
        }
        for (double& v : row) v /= total;
    }
}

void row_entropy(const Matrix& proba, std::span<double> scores) {
    for (std::size_t i = 0; i < proba.rows(); ++i) {
        double h = 0.0;
        for (double p : proba.row(i)) {
            if (p > 0.0) h -= p * std::log(p);
        }
        scores[i] = h;
    }
}

void row_min_abs(const Matrix& values, std::span<double> scores) {
    for (std::size_t i = 0; i < values.rows(); ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (double v : values.row(i)) best = std::min(best, std::abs(v));
        scores[i] = best;
    }
}

void update_min_dist(const Matrix& points, std::span<const std::size_t> rows, std::span<const double> center,
                     std::span<double> min_dist) {
    for (std::size_t t = 0; t < rows.size(); ++t) {
        auto p = points.row(rows[t]);
        double sq = 0.0;
        for (std::size_t k = 0; k < p.size(); ++k) {
            double diff = p[k] - center[k];
            sq += diff * diff;
        }
        min_dist[t] = std::min(min_dist[t], std::sqrt(sq));
    }
}

}  // namespace poolforge::kernels::serial

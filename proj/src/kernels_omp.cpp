#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

#include "poolforge/kernels.hpp"

namespace poolforge::kernels::omp {

namespace {

// Below this many multiply-adds the fork/join overhead dominates.
constexpr std::int64_t kParallelWork = 1 << 14;

std::int64_t work(std::size_t a, std::size_t b, std::size_t c = 1) {
    return static_cast<std::int64_t>(a * b * c);
}

}  // namespace

void dense_forward(const Matrix& in, const Matrix& weight, std::span<const double> bias, Matrix& out) {
    const auto rows = static_cast<std::int64_t>(in.rows());
    const std::size_t outs = weight.rows();
    const std::size_t inner = in.cols();
#pragma omp parallel for schedule(static) if (work(in.rows(), outs, inner) > kParallelWork)
    for (std::int64_t i = 0; i < rows; ++i) {
        auto x = in.row(static_cast<std::size_t>(i));
        auto y = out.row(static_cast<std::size_t>(i));
        for (std::size_t j = 0; j < outs; ++j) {
            auto w = weight.row(j);
            double acc = bias[j];
            for (std::size_t k = 0; k < inner; ++k) acc += x[k] * w[k];
            y[j] = acc;
        }
    }
}

void dense_weight_grad(const Matrix& grad_out, const Matrix& in, Matrix& grad_weight, std::span<double> grad_bias) {
    const auto outs = static_cast<std::int64_t>(grad_out.cols());
    const std::size_t batch = in.rows();
    const std::size_t inner = in.cols();
#pragma omp parallel for schedule(static) if (work(grad_out.cols(), batch, inner) > kParallelWork)
    for (std::int64_t js = 0; js < outs; ++js) {
        const auto j = static_cast<std::size_t>(js);
        auto gw = grad_weight.row(j);
        std::fill(gw.begin(), gw.end(), 0.0);
        // Accumulating row by row keeps the per-element summation order equal
        // to the serial reference (i ascending) while streaming contiguous rows.
        for (std::size_t i = 0; i < batch; ++i) {
            const double g = grad_out(i, j);
            auto x = in.row(i);
            for (std::size_t k = 0; k < inner; ++k) gw[k] += g * x[k];
        }
        double acc = 0.0;
        for (std::size_t i = 0; i < batch; ++i) acc += grad_out(i, j);
        grad_bias[j] = acc;
    }
}

void dense_input_grad(const Matrix& grad_out, const Matrix& weight, Matrix& grad_in) {
    const auto rows = static_cast<std::int64_t>(grad_out.rows());
    const std::size_t outs = weight.rows();
    const std::size_t inner = weight.cols();
#pragma omp parallel for schedule(static) if (work(grad_out.rows(), outs, inner) > kParallelWork)
    for (std::int64_t is = 0; is < rows; ++is) {
        const auto i = static_cast<std::size_t>(is);
        auto gi = grad_in.row(i);
        std::fill(gi.begin(), gi.end(), 0.0);
        for (std::size_t j = 0; j < outs; ++j) {
            const double g = grad_out(i, j);
            auto w = weight.row(j);
            for (std::size_t k = 0; k < inner; ++k) gi[k] += g * w[k];
        }
    }
}

void softmax_rows(Matrix& logits) {
    const auto rows = static_cast<std::int64_t>(logits.rows());
#pragma omp parallel for schedule(static) if (work(logits.rows(), logits.cols(), 8) > kParallelWork)
    for (std::int64_t i = 0; i < rows; ++i) {
        auto row = logits.row(static_cast<std::size_t>(i));
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
    const auto rows = static_cast<std::int64_t>(proba.rows());
#pragma omp parallel for schedule(static) if (work(proba.rows(), proba.cols(), 8) > kParallelWork)
    for (std::int64_t i = 0; i < rows; ++i) {
        double h = 0.0;
        for (double p : proba.row(static_cast<std::size_t>(i))) {
            if (p > 0.0) h -= p * std::log(p);
        }
        scores[static_cast<std::size_t>(i)] = h;
    }
}

void row_min_abs(const Matrix& values, std::span<double> scores) {
    const auto rows = static_cast<std::int64_t>(values.rows());
#pragma omp parallel for schedule(static) if (work(values.rows(), values.cols()) > kParallelWork)
    for (std::int64_t i = 0; i < rows; ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (double v : values.row(static_cast<std::size_t>(i))) best = std::min(best, std::abs(v));
        scores[static_cast<std::size_t>(i)] = best;
    }
}

void update_min_dist(const Matrix& points, std::span<const std::size_t> rows, std::span<const double> center,
                     std::span<double> min_dist) {
    const auto count = static_cast<std::int64_t>(rows.size());
    const std::size_t dim = center.size();
#pragma omp parallel for schedule(static) if (work(rows.size(), dim) > kParallelWork)
    for (std::int64_t t = 0; t < count; ++t) {
        auto p = points.row(rows[static_cast<std::size_t>(t)]);
        double sq = 0.0;
        for (std::size_t k = 0; k < dim; ++k) {
            const double diff = p[k] - center[k];
            sq += diff * diff;
        }
        auto& slot = min_dist[static_cast<std::size_t>(t)];
        slot = std::min(slot, std::sqrt(sq));
    }
}

}  // namespace poolforge::kernels::omp

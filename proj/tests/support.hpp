#pragma once

// Independent reference implementations used as oracles by the tests. None of
// these call into the library's numeric code.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <vector>

#include "poolforge/data.hpp"
#include "poolforge/matrix.hpp"
#include "poolforge/nn.hpp"
#include "poolforge/rng.hpp"

namespace poolforge::testing {

/// Error code thrown by fn, or nullopt if it returned normally.
template <typename Fn>
std::optional<ErrorCode> code_of(Fn&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    return std::nullopt;
}

inline Matrix random_matrix(std::size_t rows, std::size_t cols, Rng& rng, double lo = -1.0, double hi = 1.0) {
    Matrix m(rows, cols);
    for (double& v : m.values()) v = uniform(rng, lo, hi);
    return m;
}

/// Random probability rows. Some rows get repeated entries or exact copies of
/// earlier rows so ties actually occur.
inline Matrix random_proba(std::size_t rows, std::size_t cols, Rng& rng) {
    Matrix p(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        if (i > 0 && uniform01(rng) < 0.1) {
            const auto src = p.row(uniform_index(rng, i));
            std::copy(src.begin(), src.end(), p.row(i).begin());
            continue;
        }
        double sum = 0.0;
        for (std::size_t k = 0; k < cols; ++k) {
            const double u = uniform01(rng);
            p(i, k) = u < 0.15 ? 0.0 : -std::log(1.0 - u);
            sum += p(i, k);
        }
        if (sum == 0.0) {
            p(i, 0) = 1.0;
            sum = 1.0;
        }
        for (std::size_t k = 0; k < cols; ++k) p(i, k) /= sum;
    }
    return p;
}

/// Pool of size n whose first `labeled` entries (after a shuffle) are labeled.
inline PoolState random_pool(std::size_t n, std::size_t labeled, Rng& rng) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    shuffle(order, rng);
    std::vector<std::pair<std::size_t, Label>> picked;
    for (std::size_t i = 0; i < labeled; ++i) picked.emplace_back(order[i], 0);
    return make_pool(n, std::move(picked));
}

/// Indices (into `scores`) of the b largest scores, ties to the lower index,
/// via a full sort.
inline std::vector<std::size_t> full_sort_top(const std::vector<double>& scores, std::size_t b) {
    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t c) {
        if (scores[a] != scores[c]) return scores[a] > scores[c];
        return a < c;
    });
    order.resize(b);
    return order;
}

inline std::vector<std::size_t> full_sort_bottom(const std::vector<double>& scores, std::size_t b) {
    std::vector<double> negated(scores.size());
    std::transform(scores.begin(), scores.end(), negated.begin(), [](double s) { return -s; });
    return full_sort_top(negated, b);
}

inline double entropy_oracle(std::span<const double> row) {
    double h = 0.0;
    for (double p : row) {
        if (p > 0.0) h -= p * std::log(p);
    }
    return h;
}

inline double euclidean(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}

/// max over points of the distance to the nearest center.
inline double radius_oracle(const Matrix& points, const std::vector<std::size_t>& centers) {
    double r = 0.0;
    for (std::size_t i = 0; i < points.rows(); ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (auto c : centers) best = std::min(best, euclidean(points.row(i), points.row(c)));
        r = std::max(r, best);
    }
    return r;
}

/// Optimal covering radius over all size-b additions to `fixed`.
inline double optimal_radius(const Matrix& points, const std::vector<std::size_t>& fixed,
                             const std::vector<std::size_t>& candidates, std::size_t b) {
    double best = std::numeric_limits<double>::infinity();
    std::vector<std::size_t> pick;
    auto recurse = [&](auto&& self, std::size_t start) -> void {
        if (pick.size() == b) {
            auto centers = fixed;
            centers.insert(centers.end(), pick.begin(), pick.end());
            best = std::min(best, radius_oracle(points, centers));
            return;
        }
        for (std::size_t i = start; i < candidates.size(); ++i) {
            pick.push_back(candidates[i]);
            self(self, i + 1);
            pick.pop_back();
        }
    };
    recurse(recurse, 0);
    return best;
}

/// tanh MLP with a linear last layer, written out longhand.
inline std::vector<double> mlp_oracle(const Mlp& net, std::vector<double> x) {
    for (std::size_t l = 0; l < net.layers.size(); ++l) {
        const auto& layer = net.layers[l];
        std::vector<double> y(layer.outputs());
        for (std::size_t o = 0; o < y.size(); ++o) {
            double s = layer.bias[o];
            for (std::size_t i = 0; i < x.size(); ++i) s += layer.weight(o, i) * x[i];
            y[o] = l + 1 < net.layers.size() ? std::tanh(s) : s;
        }
        x = std::move(y);
    }
    return x;
}

inline double neg_cos_oracle(const std::vector<double>& p, const std::vector<double>& z) {
    double pz = 0.0, pp = 0.0, zz = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        pz += p[i] * z[i];
        pp += p[i] * p[i];
        zz += z[i] * z[i];
    }
    return -pz / std::sqrt(pp * zz);
}

/// Pearson r from raw sums, a different formula than the library's centered one.
inline double pearson_oracle(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    long double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += static_cast<long double>(x[i]) * x[i];
        syy += static_cast<long double>(y[i]) * y[i];
        sxy += static_cast<long double>(x[i]) * y[i];
    }
    const long double num = n * sxy - sx * sy;
    const long double den = std::sqrt((n * sxx - sx * sx) * (n * syy - sy * sy));
    return static_cast<double>(num / den);
}

/// Least squares via the 2x2 normal equations and Cramer's rule.
inline std::pair<double, double> normal_equation_line(const std::vector<double>& x, const std::vector<double>& y) {
    long double n = static_cast<long double>(x.size()), sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += static_cast<long double>(x[i]) * x[i];
        sxy += static_cast<long double>(x[i]) * y[i];
    }
    const long double det = n * sxx - sx * sx;
    const long double slope = (n * sxy - sx * sy) / det;
    const long double intercept = (sxx * sy - sx * sxy) / det;
    return {static_cast<double>(slope), static_cast<double>(intercept)};
}

/// Smallest grid position from which al >= random at every later position.
inline std::optional<std::size_t> crossover_oracle(const std::vector<std::size_t>& budgets,
                                                   const std::vector<double>& al,
                                                   const std::vector<double>& random) {
    for (std::size_t start = 0; start < budgets.size(); ++start) {
        bool holds = true;
        for (std::size_t j = start; j < budgets.size(); ++j) holds = holds && al[j] >= random[j];
        if (holds) return budgets[start];
    }
    return std::nullopt;
}

inline double max_relative_error(const std::vector<double>& analytic, const std::vector<double>& numeric,
                                 double floor = 1e-6) {
    double worst = 0.0;
    for (std::size_t i = 0; i < analytic.size(); ++i) {
        const double scale = std::max({std::abs(analytic[i]), std::abs(numeric[i]), floor});
        worst = std::max(worst, std::abs(analytic[i] - numeric[i]) / scale);
    }
    return worst;
}

}  // namespace poolforge::testing

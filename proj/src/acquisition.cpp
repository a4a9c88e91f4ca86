#include "poolforge/acquisition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "poolforge/kernels.hpp"
#include "poolforge/rng.hpp"

namespace poolforge {

std::string_view to_string(Method method) {
    switch (method) {
        case Method::random: return "random";
        case Method::entropy: return "entropy";
        case Method::kcenter: return "kcenter";
        case Method::svm_min_margin: return "svm_min_margin";
    }
    return "unknown";
}

Method parse_method(std::string_view name) {
    for (Method m : {Method::random, Method::entropy, Method::kcenter, Method::svm_min_margin}) {
        if (name == to_string(m)) return m;
    }
    fail(ErrorCode::unsupported_method, "\"" + std::string(name) + "\" (known: random, entropy, kcenter, svm_min_margin)");
}

namespace {

void check_budget(const AcquisitionRequest& request) {
    require(request.budget <= request.pool.unlabeled().size(), ErrorCode::budget_exceeded,
            "budget " + std::to_string(request.budget) + " exceeds " +
                std::to_string(request.pool.unlabeled().size()) + " unlabeled samples");
}

void check_rows(const Matrix& m, const AcquisitionRequest& request, const char* what) {
    require(m.rows() == request.pool.unlabeled().size(), ErrorCode::dimension_mismatch,
            std::string(what) + " has " + std::to_string(m.rows()) + " rows for " +
                std::to_string(request.pool.unlabeled().size()) + " unlabeled samples");
}

/// Picks `budget` positions by score. Positions index pool.unlabeled(),
/// which is sorted, so the lower position is the lower pool index.
ScoredSelection select_by_score(std::span<const double> scores, const AcquisitionRequest& request, bool highest) {
    std::vector<std::size_t> positions(scores.size());
    std::iota(positions.begin(), positions.end(), std::size_t{0});
    auto before = [&](std::size_t a, std::size_t b) {
        if (scores[a] != scores[b]) return highest ? scores[a] > scores[b] : scores[a] < scores[b];
        return a < b;
    };
    const auto mid = positions.begin() + static_cast<std::ptrdiff_t>(request.budget);
    std::partial_sort(positions.begin(), mid, positions.end(), before);

    ScoredSelection out;
    const auto unlabeled = request.pool.unlabeled();
    for (auto it = positions.begin(); it != mid; ++it) {
        out.chosen.push_back(unlabeled[*it]);
        out.scores.push_back(scores[*it]);
    }
    return out;
}

}  // namespace

ScoredSelection acquire_random(const AcquisitionRequest& request) {
    check_budget(request);
    std::vector<std::size_t> candidates(request.pool.unlabeled().begin(), request.pool.unlabeled().end());
    Rng rng = make_rng(request.seed, "acquire-random");
    // Partial Fisher-Yates: the first `budget` slots become a uniform sample.
    for (std::size_t i = 0; i < request.budget; ++i) {
        const auto j = i + static_cast<std::size_t>(uniform_index(rng, candidates.size() - i));
        std::swap(candidates[i], candidates[j]);
    }
    candidates.resize(request.budget);
    return {std::move(candidates), {}};
}

ScoredSelection acquire_entropy(const Matrix& proba, const AcquisitionRequest& request) {
    check_budget(request);
    check_rows(proba, request, "probability matrix");
    for (std::size_t i = 0; i < proba.rows(); ++i) {
        double total = 0.0;
        for (double p : proba.row(i)) {
            require(p >= 0.0 && std::isfinite(p), ErrorCode::invalid_distribution,
                    "row " + std::to_string(i) + " has a negative or non-finite entry");
            total += p;
        }
        require(std::abs(total - 1.0) <= 1e-6, ErrorCode::invalid_distribution,
                "row " + std::to_string(i) + " sums to " + std::to_string(total));
    }
    std::vector<double> scores(proba.rows());
    kernels::row_entropy(proba, scores);
    return select_by_score(scores, request, true);
}

ScoredSelection acquire_kcenter_greedy(const Matrix& embeddings, const AcquisitionRequest& request) {
    check_budget(request);
    const auto labeled = request.pool.labeled();
    const auto unlabeled = request.pool.unlabeled();
    require(!labeled.empty(), ErrorCode::empty_labeled_set, "k-center greedy needs at least one labeled sample");
    require(embeddings.rows() == request.pool.pool_size(), ErrorCode::dimension_mismatch,
            "embedding rows must cover the whole pool");

    std::vector<double> min_dist(unlabeled.size(), std::numeric_limits<double>::infinity());
    for (std::size_t center : labeled) kernels::update_min_dist(embeddings, unlabeled, embeddings.row(center), min_dist);

    ScoredSelection out;
    for (std::size_t pick = 0; pick < request.budget; ++pick) {
        // max_element keeps the first maximum: the lower pool index on ties.
        const auto best = std::ranges::max_element(min_dist);
        const auto pos = static_cast<std::size_t>(best - min_dist.begin());
        out.chosen.push_back(unlabeled[pos]);
        out.scores.push_back(*best);
        kernels::update_min_dist(embeddings, unlabeled, embeddings.row(unlabeled[pos]), min_dist);
        min_dist[pos] = -std::numeric_limits<double>::infinity();
    }
    return out;
}

ScoredSelection acquire_svm_min_margin(const Matrix& decision_values, std::size_t num_classes,
                                       const AcquisitionRequest& request) {
    check_budget(request);
    check_rows(decision_values, request, "decision value matrix");
    require(decision_values.cols() == num_classes, ErrorCode::dimension_mismatch,
            "decision values have " + std::to_string(decision_values.cols()) + " columns for " +
                std::to_string(num_classes) + " classes");
    std::vector<double> scores(decision_values.rows());
    kernels::row_min_abs(decision_values, scores);
    return select_by_score(scores, request, false);
}

double covering_radius(const Matrix& points, std::span<const std::size_t> centers) {
    require(!centers.empty(), ErrorCode::empty_labeled_set, "covering radius needs a center");
    std::vector<std::size_t> all(points.rows());
    std::iota(all.begin(), all.end(), std::size_t{0});
    std::vector<double> min_dist(points.rows(), std::numeric_limits<double>::infinity());
    for (std::size_t c : centers) kernels::update_min_dist(points, all, points.row(c), min_dist);
    return *std::ranges::max_element(min_dist);
}

}  // namespace poolforge

#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "poolforge/data.hpp"
#include "poolforge/matrix.hpp"

namespace poolforge {

enum class Method { random, entropy, kcenter, svm_min_margin };

std::string_view to_string(Method method);
/// Parses "random", "entropy", "kcenter" or "svm_min_margin"; anything else
/// (including "vaal") is an unsupported_method error.
Method parse_method(std::string_view name);

struct AcquisitionRequest {
    PoolState pool;
    std::size_t budget = 0;
    Method method = Method::random;
    std::uint64_t seed = 0;
};

/// Pool indices in selection order, with the score each had when chosen
/// (empty for random sampling).
struct ScoredSelection {
    std::vector<std::size_t> chosen;
    std::vector<double> scores;

    bool operator==(const ScoredSelection&) const = default;
};

ScoredSelection acquire_random(const AcquisitionRequest& request);

/// `proba` has one row per unlabeled index, aligned with pool.unlabeled().
/// Highest entropy first; ties go to the lower pool index.
ScoredSelection acquire_entropy(const Matrix& proba, const AcquisitionRequest& request);

/// `embeddings` has one row per pool index (labeled and unlabeled).
/// Farthest-first traversal from the labeled set under the Euclidean metric.
ScoredSelection acquire_kcenter_greedy(const Matrix& embeddings, const AcquisitionRequest& request);

/// `decision_values` has one row per unlabeled index and `num_classes`
/// columns. Score is the distance to the nearest one-vs-rest boundary,
/// min_k |f_k(x)|; smallest first, ties to the lower pool index.
ScoredSelection acquire_svm_min_margin(const Matrix& decision_values, std::size_t num_classes,
                                       const AcquisitionRequest& request);

/// Covering radius: max over pool rows of the distance to the nearest
/// center. Used by the k-center guarantee checks.
double covering_radius(const Matrix& points, std::span<const std::size_t> centers);

}  // namespace poolforge

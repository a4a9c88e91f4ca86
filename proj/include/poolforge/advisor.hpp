#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace poolforge {

/// Accuracy against labeling budget for one method/mode.
struct LearningCurve {
    std::vector<std::size_t> budgets;  // strictly increasing
    std::vector<double> accuracies;
    std::string method;
    std::string mode;
    std::size_t seeds = 1;  // number of runs averaged into this curve

    bool operator==(const LearningCurve&) const = default;
};

void validate(const LearningCurve& curve);

/// Pointwise mean of curves sharing one budget grid.
LearningCurve average_curves(std::span<const LearningCurve> curves);

/// Smallest grid budget from which `al` stays at or above `random` at every
/// later grid point; nullopt if the last point already fails.
std::optional<std::size_t> find_crossover(const LearningCurve& al, const LearningCurve& random);

/// Pearson product-moment correlation.
double pearson_corr(std::span<const double> xs, std::span<const double> ys);

struct ThresholdPoint {
    double num_classes = 0.0;
    double samples_per_class = 0.0;
};

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double pearson_r = 0.0;
    double min_classes = 0.0;  // fitted range, for extrapolation flags
    double max_classes = 0.0;
};

/// Least-squares line samples_per_class = slope * num_classes + intercept.
LineFit fit_threshold_line(std::span<const ThresholdPoint> points);

struct BudgetAdvice {
    double samples_per_class = 0.0;
    std::size_t total_budget = 0;
    bool extrapolated = false;
};

/// Predicted samples per class (floored at 1) and total ceil(C * spc).
BudgetAdvice advise_budget(const LineFit& fit, std::size_t num_classes);

}  // namespace poolforge

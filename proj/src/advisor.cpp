#include "poolforge/advisor.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "poolforge/error.hpp"

namespace poolforge {

void validate(const LearningCurve& curve) {
    require(curve.budgets.size() == curve.accuracies.size(), ErrorCode::dimension_mismatch,
            "curve budgets and accuracies differ in length");
    for (std::size_t i = 1; i < curve.budgets.size(); ++i) {
        require(curve.budgets[i] > curve.budgets[i - 1], ErrorCode::invalid_argument,
                "curve budgets must be strictly increasing");
    }
}

LearningCurve average_curves(std::span<const LearningCurve> curves) {
    require(!curves.empty(), ErrorCode::invalid_argument, "nothing to average");
    LearningCurve mean = curves.front();
    validate(mean);
    std::size_t seeds = mean.seeds;
    for (std::size_t c = 1; c < curves.size(); ++c) {
        require(curves[c].budgets == mean.budgets, ErrorCode::mismatched_grid, "curves use different budget grids");
        for (std::size_t i = 0; i < mean.accuracies.size(); ++i) mean.accuracies[i] += curves[c].accuracies[i];
        seeds += curves[c].seeds;
    }
    for (double& a : mean.accuracies) a /= static_cast<double>(curves.size());
    mean.seeds = seeds;
    return mean;
}

std::optional<std::size_t> find_crossover(const LearningCurve& al, const LearningCurve& random) {
    validate(al);
    validate(random);
    require(al.budgets == random.budgets, ErrorCode::mismatched_grid, "AL and random curves use different grids");
    std::optional<std::size_t> result;
    // Walk back from the largest budget while dominance holds.
    for (std::size_t i = al.budgets.size(); i-- > 0;) {
        if (al.accuracies[i] < random.accuracies[i]) break;
        result = al.budgets[i];
    }
    return result;
}

double pearson_corr(std::span<const double> xs, std::span<const double> ys) {
    require(xs.size() == ys.size(), ErrorCode::dimension_mismatch, "pearson_corr length mismatch");
    require(xs.size() >= 2, ErrorCode::invalid_argument, "pearson_corr needs at least two points");
    const auto n = static_cast<double>(xs.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0;
    double syy = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double dx = xs[i] - mx;
        const double dy = ys[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    require(sxx > 0.0 && syy > 0.0, ErrorCode::zero_variance, "pearson_corr input has zero variance");
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

LineFit fit_threshold_line(std::span<const ThresholdPoint> points) {
    require(points.size() >= 2, ErrorCode::invalid_argument, "line fit needs at least two points");
    std::vector<double> xs;
    std::vector<double> ys;
    for (const auto& p : points) {
        require(p.num_classes > 0.0 && p.samples_per_class > 0.0, ErrorCode::invalid_argument,
                "threshold points must be positive");
        xs.push_back(p.num_classes);
        ys.push_back(p.samples_per_class);
    }
    const auto n = static_cast<double>(xs.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    require(sxx > 0.0, ErrorCode::zero_variance, "all threshold points share one class count");

    LineFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    const bool flat = std::ranges::all_of(ys, [&](double y) { return y == ys.front(); });
    // A constant response has no defined correlation; report it as 0.
    fit.pearson_r = flat ? 0.0 : pearson_corr(xs, ys);
    fit.min_classes = *std::ranges::min_element(xs);
    fit.max_classes = *std::ranges::max_element(xs);
    return fit;
}

BudgetAdvice advise_budget(const LineFit& fit, std::size_t num_classes) {
    require(num_classes >= 2, ErrorCode::invalid_argument, "advice needs at least two classes");
    require(std::isfinite(fit.slope) && std::isfinite(fit.intercept), ErrorCode::invalid_argument,
            "line fit is not finite");
    const auto c = static_cast<double>(num_classes);
    BudgetAdvice advice;
    advice.samples_per_class = std::max(1.0, fit.slope * c + fit.intercept);
    advice.total_budget = static_cast<std::size_t>(std::ceil(c * advice.samples_per_class));
    advice.extrapolated = c < fit.min_classes || c > fit.max_classes;
    return advice;
}

}  // namespace poolforge

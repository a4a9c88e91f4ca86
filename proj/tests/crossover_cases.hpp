#pragma once

// Curve pairs with crossover budgets traced by hand.

#include <cstddef>
#include <optional>
#include <vector>

namespace poolforge::testing {

struct CrossoverCase {
    const char* name;
    std::vector<std::size_t> budgets;
    std::vector<double> random;
    std::vector<double> al;
    std::optional<std::size_t> expected;
};

inline const std::vector<CrossoverCase>& crossover_cases() {
    static const std::vector<CrossoverCase> cases = {
        {"late overtake", {1, 2, 3, 4}, {0.50, 0.60, 0.70, 0.80}, {0.45, 0.58, 0.72, 0.85}, 3},
        {"always above", {1, 2, 3}, {0.5, 0.6, 0.7}, {0.6, 0.7, 0.8}, 1},
        {"fails at last point", {1, 2, 3}, {0.5, 0.6, 0.7}, {0.6, 0.7, 0.69}, std::nullopt},
        {"identical curves", {1, 2}, {0.5, 0.6}, {0.5, 0.6}, 1},
        {"alternating, ends above", {1, 2, 3, 4, 5}, {0.5, 0.5, 0.5, 0.5, 0.5}, {0.6, 0.4, 0.6, 0.4, 0.6}, 5},
        {"alternating, two above at end", {1, 2, 3, 4, 5}, {0.5, 0.5, 0.5, 0.5, 0.5}, {0.4, 0.6, 0.4, 0.6, 0.6}, 4},
        {"single point tie", {16}, {0.3}, {0.3}, 16},
        {"single point below", {16}, {0.3}, {0.29}, std::nullopt},
        {"dip after early lead", {10, 20, 30, 40, 50, 60}, {0.1, 0.2, 0.3, 0.4, 0.5, 0.6},
         {0.2, 0.3, 0.25, 0.45, 0.55, 0.65}, 40},
        {"always below", {1, 2, 3}, {0.5, 0.6, 0.7}, {0.4, 0.5, 0.6}, std::nullopt},
        {"tie only at the end", {10, 20, 30}, {0.5, 0.6, 0.7}, {0.4, 0.5, 0.7}, 30},
        {"ties from the middle", {10, 20, 30, 40}, {0.5, 0.6, 0.7, 0.8}, {0.4, 0.6, 0.7, 0.8}, 20},
        {"above, tie, above", {10, 20, 30}, {0.5, 0.6, 0.7}, {0.6, 0.6, 0.8}, 10},
        {"early lead lost", {10, 20, 30, 40}, {0.5, 0.6, 0.7, 0.8}, {0.6, 0.7, 0.6, 0.7}, std::nullopt},
        {"overtake at third point", {16, 32, 48, 64}, {0.5, 0.6, 0.7, 0.8}, {0.4, 0.5, 0.71, 0.81}, 48},
        {"uneven grid", {100, 150, 400, 1000}, {0.3, 0.4, 0.5, 0.6}, {0.2, 0.35, 0.55, 0.61}, 400},
        {"below by a hair", {1, 2, 3}, {0.5, 0.6, 0.7}, {0.5, 0.6, 0.7 - 1e-12}, std::nullopt},
        {"lead only at first point", {1, 2, 3}, {0.5, 0.6, 0.7}, {0.9, 0.5, 0.6}, std::nullopt},
        {"zig-zag then settle", {1, 2, 3, 4, 5, 6}, {0.5, 0.5, 0.5, 0.5, 0.5, 0.5},
         {0.6, 0.4, 0.6, 0.4, 0.5, 0.7}, 5},
        {"eleven-point schedule", {16, 32, 48, 64, 80, 96, 112, 128, 144, 160, 176},
         {0.70, 0.72, 0.74, 0.76, 0.78, 0.80, 0.82, 0.84, 0.85, 0.86, 0.87},
         {0.65, 0.70, 0.73, 0.77, 0.77, 0.81, 0.83, 0.85, 0.85, 0.87, 0.88}, 96},
    };
    return cases;
}

}  // namespace poolforge::testing

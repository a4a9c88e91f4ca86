#include "poolforge/matrix.hpp"

#include <algorithm>
#include <cmath>

namespace poolforge {

Matrix widen(const FloatMatrix& m) {
    Matrix out(m.rows(), m.cols());
    std::ranges::transform(m.values(), out.values().begin(), [](float v) { return static_cast<double>(v); });
    return out;
}

bool all_finite(std::span<const double> values) {
    return std::ranges::all_of(values, [](double v) { return std::isfinite(v); });
}

bool all_finite(std::span<const float> values) {
    return std::ranges::all_of(values, [](float v) { return std::isfinite(v); });
}

}  // namespace poolforge

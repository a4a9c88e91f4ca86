#include "poolforge/rng.hpp"

#include <cmath>
#include <numbers>

namespace poolforge {

double standard_normal(Rng& rng) {
    // Box-Muller; one draw per call keeps the stream position easy to reason about.
    double u1 = uniform01(rng);
    double u2 = uniform01(rng);
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t uniform_index(Rng& rng, std::uint64_t bound) {
    // Rejection sampling removes the modulo bias.
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
    std::uint64_t x = rng();
    while (x >= limit) x = rng();
    return x % bound;
}

}  // namespace poolforge

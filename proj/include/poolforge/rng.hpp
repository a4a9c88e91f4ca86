#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace poolforge {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t fnv1a(std::string_view text, std::uint64_t hash = 0xcbf29ce484222325ULL) {
    for (unsigned char c : text) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    return hash;
}

/// Independent stream seed for (master seed, purpose, index). Streams for
/// different indices never depend on how many other streams were drawn.
inline std::uint64_t derive_seed(std::uint64_t master, std::string_view purpose, std::uint64_t index = 0) {
    return splitmix64(splitmix64(master ^ fnv1a(purpose)) + index);
}

inline Rng make_rng(std::uint64_t master, std::string_view purpose, std::uint64_t index = 0) {
    return Rng(derive_seed(master, purpose, index));
}

// The standard distributions are implementation-defined; these are not, so
// draws are reproducible across standard libraries.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline double uniform(Rng& rng, double lo, double hi) { return lo + (hi - lo) * uniform01(rng); }

double standard_normal(Rng& rng);

/// Uniform integer in [0, bound).
std::uint64_t uniform_index(Rng& rng, std::uint64_t bound);

template <typename Range>
void shuffle(Range& range, Rng& rng) {
    auto n = static_cast<std::uint64_t>(std::size(range));
    for (std::uint64_t i = n; i > 1; --i) {
        auto j = uniform_index(rng, i);
        using std::swap;
        swap(range[i - 1], range[j]);
    }
}

}  // namespace poolforge

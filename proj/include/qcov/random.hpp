#ifndef QCOV_RANDOM_HPP
#define QCOV_RANDOM_HPP

#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <utility>
#include <vector>

namespace qcov {

// std::mt19937_64's output sequence is fixed by the standard, but the
// distributions and std::shuffle are not. These helpers only use the raw
// engine output so shuffles are identical across standard libraries.

/// Uniform integer in [0, bound) by rejection sampling.
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t v;
    do {
        v = rng();
    } while (v >= limit);
    return v % bound;
}

/// Fisher-Yates shuffle.
template <typename T>
void shuffle_in_place(std::vector<T>& v, std::mt19937_64& rng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(uniform_below(rng, i));
        std::swap(v[i - 1], v[j]);
    }
}

inline std::vector<std::size_t> seeded_permutation(std::size_t n, std::uint64_t seed) {
    std::vector<std::size_t> p(n);
    std::iota(p.begin(), p.end(), std::size_t{0});
    std::mt19937_64 rng(seed);
    shuffle_in_place(p, rng);
    return p;
}

}  // namespace qcov

#endif  // QCOV_RANDOM_HPP

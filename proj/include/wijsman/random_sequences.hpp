// Seeded positive-control generators: gap traces and singleton sequences
// with prescribed hit density. Gaps are g_k = u_k * 1[k in S] with S drawn
// Bernoulli(density) and u_k uniform on [0,1].
#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "wijsman/gap_trace.hpp"
#include "wijsman/metric_sets.hpp"

namespace wijsman {

inline std::vector<double> random_gaps(std::uint64_t length, double density, std::uint64_t seed) {
    if (length == 0 || length > kDenseTraceLimit)
        throw std::invalid_argument("random_gaps: length out of range");
    if (!(density >= 0.0) || !(density <= 1.0))
        throw std::invalid_argument("random_gaps: density in [0,1]");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::bernoulli_distribution hit(density);
    std::vector<double> g(length, 0.0);
    for (auto& v : g)
        if (hit(rng)) v = unif(rng);
    return g;
}

/// Scalar sequence B_k = {g_k} with limit {0}; statistically convergent at
/// scale whenever density is small.
inline SetSequence random_singleton_sequence(std::uint64_t length, double density,
                                             std::uint64_t seed) {
    const auto gaps = random_gaps(length, density, seed);
    std::vector<ClosedSet> items;
    items.reserve(gaps.size());
    for (double g : gaps) items.push_back(ClosedSet::singleton(Point::scalar(g)));
    return SetSequence::materialized(std::move(items), ClosedSet::singleton(Point::scalar(0.0)));
}

}  // namespace wijsman

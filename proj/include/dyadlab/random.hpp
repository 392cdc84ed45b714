#pragma once

// Seeded generators for random weights, functions and leaf sets.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "dyadlab/grid.hpp"
#include "dyadlab/weight_family.hpp"

namespace dyadlab {

using Rng = std::mt19937_64;

/// Multiplicative cascade: each cube splits its mass between the children in ratio
/// exp(s U) : 1 with U uniform in [-1,1]. Per-level ratios are bounded, so the weight is
/// doubling with A_2 constant controlled by s and the depth.
inline Weight cascade_weight(const DyadicGrid& grid, Rng& rng, double strength) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> density(grid.cube_count(), 1.0);
    for (std::size_t i = 0; 2 * i + 2 < density.size(); ++i) {
        const double a = std::exp(strength * u(rng));
        density[2 * i + 1] = density[i] * 2.0 * a / (a + 1.0);
        density[2 * i + 2] = density[i] * 2.0 / (a + 1.0);
    }
    const std::size_t base = grid.leaf_count() - 1;
    return Weight(grid, std::vector<double>(density.begin() + static_cast<std::ptrdiff_t>(base), density.end()));
}

/// Independent leaf values exp(s Z), Z standard normal.
inline Weight lognormal_weight(const DyadicGrid& grid, Rng& rng, double strength) {
    std::normal_distribution<double> z(0.0, 1.0);
    std::vector<double> v(grid.leaf_count());
    for (auto& x : v) x = std::exp(strength * z(rng));
    return Weight(grid, std::move(v));
}

/// Random leaf set, each leaf included with probability q; never empty or full.
inline LeafSet random_leaf_set(const DyadicGrid& grid, Rng& rng, double q = 0.5) {
    std::bernoulli_distribution coin(q);
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < grid.leaf_count(); ++i) {
        if (coin(rng)) idx.push_back(i);
    }
    if (idx.empty()) idx.push_back(0);
    if (idx.size() == grid.leaf_count()) idx.pop_back();
    return LeafSet::of(std::move(idx));
}

/// A mix of cascade, lognormal, two-valued and spiky weights.
inline Weight random_weight(const DyadicGrid& grid, Rng& rng) {
    std::uniform_int_distribution<int> kind(0, 3);
    std::uniform_real_distribution<double> s(0.1, 2.0);
    switch (kind(rng)) {
        case 0: return cascade_weight(grid, rng, s(rng));
        case 1: return lognormal_weight(grid, rng, s(rng));
        case 2: {
            if (grid.depth() == 0) return lognormal_weight(grid, rng, s(rng));
            std::uniform_real_distribution<double> lt(-8.0, 8.0);
            return materialize(TwoValuedFamily{std::exp(lt(rng)), random_leaf_set(grid, rng, 0.3)}, grid);
        }
        default: {
            // a few large spikes on a flat background
            std::vector<double> v(grid.leaf_count(), 1.0);
            std::uniform_int_distribution<std::size_t> leaf(0, grid.leaf_count() - 1);
            std::uniform_real_distribution<double> lh(0.0, 12.0);
            const int spikes = 1 + static_cast<int>(rng() % 4);
            for (int i = 0; i < spikes; ++i) v[leaf(rng)] = std::exp(lh(rng));
            return Weight(grid, std::move(v));
        }
    }
}

/// A_2-style random weight: a cascade, optionally with bounded lognormal noise.
inline Weight random_a2_weight(const DyadicGrid& grid, Rng& rng) {
    std::uniform_real_distribution<double> s(0.2, 1.5);
    const Weight c = cascade_weight(grid, rng, s(rng));
    std::uniform_real_distribution<double> noise(-0.5, 0.5);
    std::vector<double> v(c.values().begin(), c.values().end());
    for (auto& x : v) x *= std::exp(noise(rng));
    return Weight(grid, std::move(v));
}

/// Standard normal leaf values.
inline GridFunction random_function(const DyadicGrid& grid, Rng& rng) {
    std::normal_distribution<double> z(0.0, 1.0);
    GridFunction f(grid);
    for (auto& x : f.mutable_values()) x = z(rng);
    return f;
}

/// Strictly positive leaf values exp(s Z), with s drawn in (0, 3).
inline GridFunction random_positive_function(const DyadicGrid& grid, Rng& rng) {
    std::normal_distribution<double> z(0.0, 1.0);
    std::uniform_real_distribution<double> s(0.1, 3.0);
    const double strength = s(rng);
    GridFunction f(grid);
    for (auto& x : f.mutable_values()) x = std::exp(strength * z(rng));
    return f;
}

/// Nonnegative functions: sparse bumps or dense lognormal.
inline GridFunction random_nonnegative_function(const DyadicGrid& grid, Rng& rng) {
    std::bernoulli_distribution sparse(0.5);
    if (!sparse(rng)) return random_positive_function(grid, rng);
    GridFunction f(grid);
    std::uniform_int_distribution<std::size_t> leaf(0, grid.leaf_count() - 1);
    std::exponential_distribution<double> mag(0.2);
    const int n = 1 + static_cast<int>(rng() % 8);
    for (int i = 0; i < n; ++i) f[leaf(rng)] += mag(rng);
    return f;
}

}  // namespace dyadlab

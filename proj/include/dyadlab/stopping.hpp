#pragma once

/**
 * @file stopping.hpp
 * @brief Stopping-time constructions: Calderon-Zygmund cubes and principal cubes.
 */

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

#include "dyadlab/grid.hpp"
#include "dyadlab/shift.hpp"

namespace dyadlab {

struct CZDecomposition {
    double lambda = 0.0;
    std::vector<Cube> cubes;
    std::vector<double> averages;
    /// Set when the root average already exceeds lambda; cubes is then {root}.
    bool root_exceeds = false;

    /// Leaf mask of the union of the cubes.
    std::vector<bool> union_mask(const DyadicGrid& grid) const {
        std::vector<bool> m(grid.leaf_count(), false);
        for (const auto& c : cubes) {
            for (std::size_t i = grid.first_leaf(c); i < grid.end_leaf(c); ++i) m[i] = true;
        }
        return m;
    }
};

/// Maximal dyadic cubes on which the mean of f exceeds lambda. f must be nonnegative.
inline CZDecomposition cz_decompose(const GridFunction& f, double lambda) {
    if (!(lambda > 0.0)) throw std::invalid_argument("cz_decompose: lambda must be positive");
    const auto& g = f.grid();
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (f[i] < 0.0) throw std::invalid_argument("cz_decompose: input must be nonnegative");
    }
    const auto means = cube_means(g, f.values());
    CZDecomposition out;
    out.lambda = lambda;
    if (means[0] > lambda) {
        out.root_exceeds = true;
        out.cubes.push_back(DyadicGrid::root());
        out.averages.push_back(means[0]);
        return out;
    }
    // explicit stack, visiting left before right so cubes come out in position order
    std::vector<Cube> stack{DyadicGrid::root()};
    while (!stack.empty()) {
        const Cube c = stack.back();
        stack.pop_back();
        const double a = means[DyadicGrid::index(c)];
        if (a > lambda) {
            out.cubes.push_back(c);
            out.averages.push_back(a);
            continue;
        }
        if (g.is_leaf(c)) continue;
        stack.push_back(DyadicGrid::right_child(c));
        stack.push_back(DyadicGrid::left_child(c));
    }
    return out;
}

inline constexpr std::size_t kNoCube = std::numeric_limits<std::size_t>::max();

struct PrincipalCubes {
    Cube root;
    std::vector<Cube> cubes;            // discovery order, generation by generation
    std::vector<int> generation;        // per cube
    std::vector<std::size_t> parent;    // principal parent index, kNoCube for generation 0
    std::vector<double> sigma_average;  // <sigma>_S
    std::vector<double> e_measure;      // |E(S)|
    std::vector<std::size_t> owner;     // per leaf: smallest principal cube containing it, or kNoCube

    std::size_t generation_count() const {
        int g = -1;
        for (int x : generation) g = std::max(g, x);
        return static_cast<std::size_t>(g + 1);
    }
};

/**
 * Principal cubes of sigma inside root: generation 0 is {root} (or, with a filter, the
 * maximal filtered cubes inside root); the children of S are the maximal filtered cubes
 * strictly inside S with <sigma> > 2 <sigma>_S. E(S) is S minus its principal children.
 */
inline PrincipalCubes principal_cubes(const Weight& sigma, Cube root, const CubePredicate& filter = {}) {
    const auto& g = sigma.grid();
    if (!g.contains_cube(root)) throw std::invalid_argument("principal_cubes: root is not a grid cube");
    auto pass = [&](Cube c) { return !filter || filter(c); };

    PrincipalCubes pc;
    pc.root = root;
    pc.owner.assign(g.leaf_count(), kNoCube);

    auto add = [&](Cube c, int gen, std::size_t parent) {
        pc.cubes.push_back(c);
        pc.generation.push_back(gen);
        pc.parent.push_back(parent);
        pc.sigma_average.push_back(sigma.average(c));
    };

    // maximal cubes strictly below `top` passing the filter and the optional threshold
    auto maximal_below = [&](Cube top, double threshold, auto&& emit) {
        std::vector<Cube> stack;
        if (!g.is_leaf(top)) {
            stack.push_back(DyadicGrid::right_child(top));
            stack.push_back(DyadicGrid::left_child(top));
        }
        while (!stack.empty()) {
            const Cube c = stack.back();
            stack.pop_back();
            if (pass(c) && sigma.average(c) > threshold) {
                emit(c);
                continue;
            }
            if (g.is_leaf(c)) continue;
            stack.push_back(DyadicGrid::right_child(c));
            stack.push_back(DyadicGrid::left_child(c));
        }
    };

    if (pass(root)) {
        add(root, 0, kNoCube);
    } else if (filter) {
        maximal_below(root, -std::numeric_limits<double>::infinity(), [&](Cube c) { add(c, 0, kNoCube); });
    }

    for (std::size_t s = 0; s < pc.cubes.size(); ++s) {
        const Cube top = pc.cubes[s];
        const int gen = pc.generation[s] + 1;
        const double threshold = 2.0 * pc.sigma_average[s];
        maximal_below(top, threshold, [&](Cube c) { add(c, gen, s); });
    }

    // cubes are discovered parents-first, so later (smaller) cubes overwrite ownership
    for (std::size_t s = 0; s < pc.cubes.size(); ++s) {
        const Cube c = pc.cubes[s];
        for (std::size_t i = g.first_leaf(c); i < g.end_leaf(c); ++i) pc.owner[i] = s;
    }
    pc.e_measure.assign(pc.cubes.size(), 0.0);
    for (std::size_t owner : pc.owner) {
        if (owner != kNoCube) pc.e_measure[owner] += g.leaf_length();
    }
    return pc;
}

/// Cubes K with 2^a < <w>_K <sigma>_K <= 2^{a+1} and level(K) = residue mod modulus.
/// Holds references to w and sigma.
inline CubePredicate a2_band_filter(const Weight& w, const Weight& sigma, int a, int residue = 0, int modulus = 1) {
    if (modulus < 1 || residue < 0 || residue >= modulus) {
        throw std::invalid_argument("a2_band_filter: need 0 <= residue < modulus");
    }
    const double lo = std::ldexp(1.0, a), hi = std::ldexp(1.0, a + 1);
    return [&w, &sigma, lo, hi, residue, modulus](Cube k) {
        if (k.level % modulus != residue) return false;
        const double v = w.average(k) * sigma.average(k);
        return v > lo && v <= hi;
    };
}

}  // namespace dyadlab

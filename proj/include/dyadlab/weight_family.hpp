#pragma once

// Closed-form weight families and their exact cell averages.

#include <cmath>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "dyadlab/grid.hpp"

namespace dyadlab {

/// A set of finest cells: either the left half of [0,1) or an explicit leaf-index list.
struct LeafSet {
    bool left_half = false;
    std::vector<std::size_t> leaves;

    static LeafSet left() { return {true, {}}; }
    static LeafSet of(std::vector<std::size_t> idx) { return {false, std::move(idx)}; }

    std::vector<bool> mask(const DyadicGrid& grid) const {
        std::vector<bool> m(grid.leaf_count(), false);
        if (left_half) {
            if (grid.depth() == 0) throw std::invalid_argument("left_half needs depth >= 1");
            for (std::size_t i = 0; i < grid.leaf_count() / 2; ++i) m[i] = true;
            return m;
        }
        for (std::size_t i : leaves) {
            if (i >= grid.leaf_count()) {
                throw std::invalid_argument("leaf index " + std::to_string(i) + " outside grid of " +
                                            std::to_string(grid.leaf_count()) + " leaves");
            }
            m[i] = true;
        }
        return m;
    }
};

struct RawFamily {
    std::vector<double> values;
};

/// w = t on E, 1 elsewhere.
struct TwoValuedFamily {
    double t = 1.0;
    LeafSet set;
};

/// w(x) = x^alpha on [0,1), alpha > -1.
struct PowerFamily {
    double alpha = 0.0;
};

using WeightFamilySpec = std::variant<RawFamily, TwoValuedFamily, PowerFamily>;

namespace detail {

/// (b^s - a^s)/(s (b - a)) for 0 <= a < b, s > 0, without cancellation.
inline double power_cell_average(double a, double b, double s) {
    const double h = b - a;
    if (a == 0.0) return std::pow(b, s) / (s * h);
    return std::pow(a, s) * std::expm1(s * std::log1p(h / a)) / (s * h);
}

}  // namespace detail

/// Leaf values are the exact cell averages of the ideal weight.
inline Weight materialize(const WeightFamilySpec& spec, const DyadicGrid& grid) {
    return std::visit(
        [&](const auto& fam) -> Weight {
            using T = std::decay_t<decltype(fam)>;
            if constexpr (std::is_same_v<T, RawFamily>) {
                return Weight(grid, fam.values);
            } else if constexpr (std::is_same_v<T, TwoValuedFamily>) {
                if (!(fam.t > 0.0) || !std::isfinite(fam.t)) {
                    throw std::invalid_argument("two_valued: t must be positive and finite");
                }
                const auto m = fam.set.mask(grid);
                std::size_t count = 0;
                for (bool b : m) count += b;
                if (count == 0 || count == grid.leaf_count()) {
                    throw std::invalid_argument("two_valued: E must be a nonempty proper subset of the leaves");
                }
                std::vector<double> v(grid.leaf_count());
                for (std::size_t i = 0; i < v.size(); ++i) v[i] = m[i] ? fam.t : 1.0;
                return Weight(grid, std::move(v));
            } else {
                if (!(fam.alpha > -1.0) || !std::isfinite(fam.alpha)) {
                    throw std::invalid_argument("power: alpha must exceed -1");
                }
                const double h = grid.leaf_length();
                const double s = fam.alpha + 1.0;
                std::vector<double> v(grid.leaf_count());
                for (std::size_t i = 0; i < v.size(); ++i) {
                    v[i] = detail::power_cell_average(static_cast<double>(i) * h, static_cast<double>(i + 1) * h, s);
                }
                return Weight(grid, std::move(v));
            }
        },
        spec);
}

/// Cell averages of log(1/x) on the finest cells.
inline GridFunction log_reciprocal(const DyadicGrid& grid) {
    const double h = grid.leaf_length();
    GridFunction f(grid);
    // antiderivative of -log x is x - x log x
    auto anti = [](double x) { return x == 0.0 ? 0.0 : x - x * std::log(x); };
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double a = static_cast<double>(i) * h, b = a + h;
        f[i] = (anti(b) - anti(a)) / h;
    }
    return f;
}

}  // namespace dyadlab

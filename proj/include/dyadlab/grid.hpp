#pragma once

/**
 * @file grid.hpp
 * @brief Standard dyadic grid on [0,1), grid functions and weights.
 *
 * Cells are addressed as (level k, position j) with cell (k,j) = [j 2^-k, (j+1) 2^-k).
 * Per-cube quantities are stored in heap order: index(k,j) = 2^k - 1 + j, so the
 * root is 0 and the children of i are 2i+1 and 2i+2.
 */

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace dyadlab {

/// Largest depth accepted by DyadicGrid (2^26 leaves).
inline constexpr int kMaxDepth = 26;

struct Cube {
    int level = 0;
    std::size_t pos = 0;

    constexpr bool operator==(const Cube&) const = default;
};

class DyadicGrid {
public:
    DyadicGrid() = default;

    explicit DyadicGrid(int depth) : depth_(depth) {
        if (depth < 0 || depth > kMaxDepth) {
            throw std::invalid_argument("grid depth must lie in [0, " + std::to_string(kMaxDepth) +
                                        "], got " + std::to_string(depth));
        }
    }

    int depth() const { return depth_; }
    std::size_t leaf_count() const { return std::size_t{1} << depth_; }
    std::size_t cube_count() const { return (std::size_t{1} << (depth_ + 1)) - 1; }
    double leaf_length() const { return std::ldexp(1.0, -depth_); }

    static constexpr Cube root() { return {0, 0}; }
    static constexpr Cube parent(Cube c) { return {c.level - 1, c.pos / 2}; }
    static constexpr Cube left_child(Cube c) { return {c.level + 1, 2 * c.pos}; }
    static constexpr Cube right_child(Cube c) { return {c.level + 1, 2 * c.pos + 1}; }

    static constexpr std::size_t index(Cube c) { return ((std::size_t{1} << c.level) - 1) + c.pos; }

    static Cube cube_at(std::size_t idx) {
        int level = 0;
        while (((std::size_t{2} << level) - 1) <= idx) ++level;
        return {level, idx - ((std::size_t{1} << level) - 1)};
    }

    static double length(Cube c) { return std::ldexp(1.0, -c.level); }

    bool is_leaf(Cube c) const { return c.level == depth_; }

    bool contains_cube(Cube c) const {
        return c.level >= 0 && c.level <= depth_ && c.pos < (std::size_t{1} << c.level);
    }

    /// Number of leaves inside c.
    std::size_t span_of(Cube c) const { return std::size_t{1} << (depth_ - c.level); }
    std::size_t first_leaf(Cube c) const { return c.pos << (depth_ - c.level); }
    std::size_t end_leaf(Cube c) const { return (c.pos + 1) << (depth_ - c.level); }

    /// The cube at the given level containing a leaf.
    Cube ancestor_of_leaf(std::size_t leaf, int level) const {
        return {level, leaf >> (depth_ - level)};
    }

    static bool contains(Cube outer, Cube inner) {
        return inner.level >= outer.level && (inner.pos >> (inner.level - outer.level)) == outer.pos;
    }

    bool operator==(const DyadicGrid&) const = default;

private:
    int depth_ = 0;
};

/// Per-cube sums of leaf values, heap ordered, built bottom-up (pairwise summation).
inline std::vector<double> cube_sums(const DyadicGrid& grid, std::span<const double> leaves) {
    const std::size_t n = grid.leaf_count();
    if (leaves.size() != n) throw std::invalid_argument("cube_sums: leaf array has wrong length");
    std::vector<double> sums(grid.cube_count());
    const std::size_t leaf_base = n - 1;
    for (std::size_t i = 0; i < n; ++i) sums[leaf_base + i] = leaves[i];
    for (std::size_t i = leaf_base; i-- > 0;) sums[i] = sums[2 * i + 1] + sums[2 * i + 2];
    return sums;
}

/// Per-cube means of leaf values.
inline std::vector<double> cube_means(const DyadicGrid& grid, std::span<const double> leaves) {
    auto sums = cube_sums(grid, leaves);
    for (int k = 0; k <= grid.depth(); ++k) {
        const double inv = std::ldexp(1.0, k - grid.depth());
        const std::size_t lo = (std::size_t{1} << k) - 1, hi = (std::size_t{2} << k) - 1;
        for (std::size_t i = lo; i < hi; ++i) sums[i] *= inv;
    }
    return sums;
}

/// Leaf-wise maximum of a per-cube quantity over all cubes containing the leaf.
inline std::vector<double> sup_over_ancestors(const DyadicGrid& grid, std::span<const double> per_cube) {
    if (per_cube.size() != grid.cube_count()) throw std::invalid_argument("sup_over_ancestors: wrong length");
    std::vector<double> run(per_cube.begin(), per_cube.end());
    for (std::size_t i = 1; i < run.size(); ++i) run[i] = std::max(run[i], run[(i - 1) / 2]);
    const std::size_t base = grid.leaf_count() - 1;
    return {run.begin() + static_cast<std::ptrdiff_t>(base), run.end()};
}

/// Leaf-wise sum of per-cube deposits over all cubes containing the leaf.
inline std::vector<double> sum_over_ancestors(const DyadicGrid& grid, std::span<const double> per_cube) {
    if (per_cube.size() != grid.cube_count()) throw std::invalid_argument("sum_over_ancestors: wrong length");
    std::vector<double> run(per_cube.begin(), per_cube.end());
    for (std::size_t i = 1; i < run.size(); ++i) run[i] += run[(i - 1) / 2];
    const std::size_t base = grid.leaf_count() - 1;
    return {run.begin() + static_cast<std::ptrdiff_t>(base), run.end()};
}

/// A real function, constant on the finest cells of a grid.
class GridFunction {
public:
    GridFunction() = default;

    explicit GridFunction(DyadicGrid grid, double fill = 0.0) : grid_(grid), values_(grid.leaf_count(), fill) {}

    GridFunction(DyadicGrid grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
        if (values_.size() != grid_.leaf_count()) {
            throw std::invalid_argument("GridFunction: expected " + std::to_string(grid_.leaf_count()) +
                                        " values, got " + std::to_string(values_.size()));
        }
        for (double v : values_) {
            if (!std::isfinite(v)) throw std::invalid_argument("GridFunction: non-finite value");
        }
    }

    static GridFunction indicator(DyadicGrid grid, Cube c) {
        GridFunction f(grid);
        for (std::size_t i = grid.first_leaf(c); i < grid.end_leaf(c); ++i) f.values_[i] = 1.0;
        return f;
    }

    /// Sup-normalized Haar function of a non-leaf cube: +1 on the left child, -1 on the right.
    static GridFunction haar(DyadicGrid grid, Cube c) {
        if (grid.is_leaf(c)) throw std::invalid_argument("haar: a leaf cell has no Haar function");
        GridFunction f(grid);
        const std::size_t mid = grid.first_leaf(DyadicGrid::right_child(c));
        for (std::size_t i = grid.first_leaf(c); i < grid.end_leaf(c); ++i) f.values_[i] = i < mid ? 1.0 : -1.0;
        return f;
    }

    const DyadicGrid& grid() const { return grid_; }
    std::span<const double> values() const { return values_; }
    std::vector<double>& mutable_values() { return values_; }
    std::size_t size() const { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }
    double& operator[](std::size_t i) { return values_[i]; }

    GridFunction abs() const { return map([](double v) { return std::fabs(v); }); }

    template <class F>
    GridFunction map(F&& fn) const {
        GridFunction out(grid_);
        for (std::size_t i = 0; i < values_.size(); ++i) out.values_[i] = fn(values_[i]);
        return out;
    }

    GridFunction& operator+=(const GridFunction& o) { return zip_assign(o, std::plus<>{}); }
    GridFunction& operator-=(const GridFunction& o) { return zip_assign(o, std::minus<>{}); }
    GridFunction& operator*=(const GridFunction& o) { return zip_assign(o, std::multiplies<>{}); }
    GridFunction& operator*=(double s) {
        for (double& v : values_) v *= s;
        return *this;
    }

    friend GridFunction operator+(GridFunction a, const GridFunction& b) { return a += b; }
    friend GridFunction operator-(GridFunction a, const GridFunction& b) { return a -= b; }
    friend GridFunction operator*(GridFunction a, const GridFunction& b) { return a *= b; }
    friend GridFunction operator*(double s, GridFunction a) { return a *= s; }

    /// <f, g> = sum f_i g_i 2^-N
    double pair(const GridFunction& o) const {
        check_same_grid(o);
        double s = 0.0;
        for (std::size_t i = 0; i < values_.size(); ++i) s += values_[i] * o.values_[i];
        return s * grid_.leaf_length();
    }

    double integral() const {
        double s = 0.0;
        for (double v : values_) s += v;
        return s * grid_.leaf_length();
    }

    /// (integral |f|^p)^{1/p}; valid for any p > 0.
    double lp_norm(double p) const {
        double s = 0.0;
        for (double v : values_) s += std::pow(std::fabs(v), p);
        return std::pow(s * grid_.leaf_length(), 1.0 / p);
    }

    double sup_norm() const {
        double s = 0.0;
        for (double v : values_) s = std::max(s, std::fabs(v));
        return s;
    }

    /// Mean of the function over a cube.
    double mean_over(Cube c) const {
        double s = 0.0;
        for (std::size_t i = grid_.first_leaf(c); i < grid_.end_leaf(c); ++i) s += values_[i];
        return s / static_cast<double>(grid_.span_of(c));
    }

    void check_same_grid(const GridFunction& o) const {
        if (!(grid_ == o.grid_)) throw std::invalid_argument("grid functions live on different grids");
    }

private:
    template <class Op>
    GridFunction& zip_assign(const GridFunction& o, Op op) {
        check_same_grid(o);
        for (std::size_t i = 0; i < values_.size(); ++i) values_[i] = op(values_[i], o.values_[i]);
        return *this;
    }

    DyadicGrid grid_;
    std::vector<double> values_;
};

/**
 * Strictly positive piecewise-constant weight with cached per-cube sums.
 *
 * Leaf values are the weight; all powers and logarithms act on leaf values.
 * Immutable after construction.
 */
class Weight {
public:
    Weight() = default;

    Weight(DyadicGrid grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
        if (values_.size() != grid_.leaf_count()) {
            throw std::invalid_argument("Weight: expected " + std::to_string(grid_.leaf_count()) +
                                        " leaf values, got " + std::to_string(values_.size()));
        }
        for (std::size_t i = 0; i < values_.size(); ++i) {
            if (!(values_[i] > 0.0) || !std::isfinite(values_[i])) {
                throw std::invalid_argument("Weight: leaf " + std::to_string(i) +
                                            " is not strictly positive and finite");
            }
        }
        sums_ = dyadlab::cube_sums(grid_, values_);
    }

    static Weight constant(DyadicGrid grid, double c) { return Weight(grid, std::vector<double>(grid.leaf_count(), c)); }

    const DyadicGrid& grid() const { return grid_; }
    std::span<const double> values() const { return values_; }
    double operator[](std::size_t i) const { return values_[i]; }
    std::size_t size() const { return values_.size(); }

    /// w(Q) = integral of w over Q.
    double mass(Cube c) const { return sums_[DyadicGrid::index(c)] * grid_.leaf_length(); }
    double average(Cube c) const { return sums_[DyadicGrid::index(c)] / static_cast<double>(grid_.span_of(c)); }
    double total_mass() const { return mass(DyadicGrid::root()); }

    /// Per-cube leaf-value sums in heap order.
    std::span<const double> cube_sums() const { return sums_; }

    double min_value() const { return *std::min_element(values_.begin(), values_.end()); }
    double max_value() const { return *std::max_element(values_.begin(), values_.end()); }

    GridFunction as_function() const { return GridFunction(grid_, values_); }

    /// Leaf-wise power w^s (still a weight).
    Weight pow(double s) const {
        std::vector<double> v(values_.size());
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::pow(values_[i], s);
        return Weight(grid_, std::move(v));
    }

private:
    DyadicGrid grid_;
    std::vector<double> values_;
    std::vector<double> sums_;
};

/// Conjugate exponent p' = p/(p-1).
inline double conjugate(double p) {
    if (!(p > 1.0)) throw std::invalid_argument("conjugate exponent requires p > 1");
    return p / (p - 1.0);
}

/// sigma = w^{-1/(p-1)}, applied to leaf values.
inline Weight dual_weight(const Weight& w, double p) {
    if (!(p > 1.0)) throw std::invalid_argument("dual_weight requires p > 1");
    return w.pow(-1.0 / (p - 1.0));
}

}  // namespace dyadlab

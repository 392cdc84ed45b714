#pragma once

/**
 * @file shift.hpp
 * @brief Dyadic (Haar) shifts of complexity (m, n) on a finite grid.
 *
 * A shift is a sum over cubes K of blocks
 *
 *     A_K f = |K|^{-1} sum_{I, J} c_K[I,J] <h_I^J, f> k_J^I,
 *
 * with I running over the level(K)+m descendants of K, J over the level(K)+n
 * descendants, |c| <= 1 and profiles h, k piecewise constant on the children of I
 * (resp. J) with sup-norm at most 1. A leaf-level cell has a constant profile.
 * Only cubes whose descendants fit inside the grid carry a block; for cancellative
 * shifts the profiles need two children, so the deepest eligible level is N-1-max(m,n).
 *
 * Application costs O(#terms + 2^N): inner products come from per-cube sums and the
 * outputs are deposited per cube and pushed down to the leaves.
 */

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "dyadlab/grid.hpp"

namespace dyadlab {

/// Profile of a generalized Haar function: values on the left and right child.
struct Profile {
    double left = 0.0;
    double right = 0.0;
};

struct ShiftTerm {
    Cube block;  // K
    Cube in;     // I, level(K) + m
    Cube out;    // J, level(K) + n
    double coeff = 0.0;
    Profile h;  // on I
    Profile k;  // on J
};

/// Optional cube predicate selecting the blocks of a sub-shift; empty means all blocks.
using CubePredicate = std::function<bool(Cube)>;

inline CubePredicate cubes_inside(Cube q) {
    return [q](Cube k) { return DyadicGrid::contains(q, k); };
}

inline CubePredicate cubes_strictly_containing(Cube q) {
    return [q](Cube k) { return k.level < q.level && DyadicGrid::contains(k, q); };
}

enum class ShiftKind { petermichl, haar_multiplier, random };

inline std::string to_string(ShiftKind k) {
    switch (k) {
        case ShiftKind::petermichl: return "petermichl";
        case ShiftKind::haar_multiplier: return "haar_multiplier";
        case ShiftKind::random: return "random";
    }
    return "unknown";
}

class HaarShift {
public:
    HaarShift() = default;

    HaarShift(DyadicGrid grid, int m, int n, bool cancellative, std::vector<ShiftTerm> terms, double scale = 1.0)
        : grid_(grid), m_(m), n_(n), cancellative_(cancellative), terms_(std::move(terms)), scale_(scale) {
        for (const auto& t : terms_) validate(t);
    }

    const DyadicGrid& grid() const { return grid_; }
    int m() const { return m_; }
    int n() const { return n_; }
    int complexity() const { return std::max(m_, n_); }
    bool cancellative() const { return cancellative_; }
    double scale() const { return scale_; }
    const std::vector<ShiftTerm>& terms() const { return terms_; }

    /// Distinct cubes K that carry a block.
    std::vector<Cube> block_cubes() const {
        std::vector<Cube> out;
        for (const auto& t : terms_) {
            if (out.empty() || !(out.back() == t.block)) out.push_back(t.block);
        }
        return out;
    }

    /// sha_Q f = sum over K passing the predicate of A_K f.
    GridFunction apply(const GridFunction& f, const CubePredicate& keep = {}) const {
        return apply_impl(f, keep, false, false);
    }

    /// Adjoint with respect to the unweighted pairing: roles of (I, h) and (J, k) swap.
    GridFunction apply_adjoint(const GridFunction& f, const CubePredicate& keep = {}) const {
        return apply_impl(f, keep, true, false);
    }

    /// The same sum with every coefficient and profile replaced by its absolute value.
    GridFunction apply_absolute(const GridFunction& f, bool adjoint = false) const {
        return apply_impl(f, {}, adjoint, true);
    }

    /// A single block A_K applied to f.
    GridFunction apply_block(Cube block, const GridFunction& f) const {
        return apply(f, [block](Cube c) { return c == block; });
    }

private:
    void validate(const ShiftTerm& t) const {
        const int r = std::max(m_, n_);
        const bool ok = grid_.contains_cube(t.block) && grid_.contains_cube(t.in) && grid_.contains_cube(t.out) &&
                        t.in.level == t.block.level + m_ && t.out.level == t.block.level + n_ &&
                        DyadicGrid::contains(t.block, t.in) && DyadicGrid::contains(t.block, t.out) &&
                        t.block.level + r <= grid_.depth();
        if (!ok) throw std::invalid_argument("HaarShift: term does not fit the (m, n) block structure");
        auto bounded = [](Profile p) { return std::fabs(p.left) <= 1.0 && std::fabs(p.right) <= 1.0; };
        if (std::fabs(t.coeff) > 1.0 || !bounded(t.h) || !bounded(t.k)) {
            throw std::invalid_argument("HaarShift: coefficients and profiles must be bounded by 1");
        }
        auto flat_on_leaf = [&](Cube c, Profile p) { return !grid_.is_leaf(c) || p.left == p.right; };
        if (!flat_on_leaf(t.in, t.h) || !flat_on_leaf(t.out, t.k)) {
            throw std::invalid_argument("HaarShift: a leaf-level profile must be constant");
        }
        if (cancellative_ && (t.h.left != -t.h.right || t.k.left != -t.k.right || grid_.is_leaf(t.in) ||
                              grid_.is_leaf(t.out))) {
            throw std::invalid_argument("HaarShift: cancellative profiles must have mean zero");
        }
    }

    GridFunction apply_impl(const GridFunction& f, const CubePredicate& keep, bool adjoint, bool absolute) const {
        if (!(f.grid() == grid_)) throw std::invalid_argument("HaarShift: function lives on another grid");
        const auto sums = cube_sums(grid_, f.values());
        std::vector<double> deposit(grid_.cube_count(), 0.0);
        const double h_leaf = grid_.leaf_length();
        auto mag = [absolute](double v) { return absolute ? std::fabs(v) : v; };

        for (const auto& t : terms_) {
            if (keep && !keep(t.block)) continue;
            const Cube src = adjoint ? t.out : t.in;
            const Cube dst = adjoint ? t.in : t.out;
            const Profile ps = adjoint ? t.k : t.h;
            const Profile pd = adjoint ? t.h : t.k;
            double inner;
            if (grid_.is_leaf(src)) {
                inner = mag(ps.left) * sums[DyadicGrid::index(src)];
            } else {
                inner = mag(ps.left) * sums[DyadicGrid::index(DyadicGrid::left_child(src))] +
                        mag(ps.right) * sums[DyadicGrid::index(DyadicGrid::right_child(src))];
            }
            const double amp = scale_ * mag(t.coeff) * inner * h_leaf / DyadicGrid::length(t.block);
            if (amp == 0.0) continue;
            if (grid_.is_leaf(dst)) {
                deposit[DyadicGrid::index(dst)] += amp * mag(pd.left);
            } else {
                deposit[DyadicGrid::index(DyadicGrid::left_child(dst))] += amp * mag(pd.left);
                deposit[DyadicGrid::index(DyadicGrid::right_child(dst))] += amp * mag(pd.right);
            }
        }
        return GridFunction(grid_, sum_over_ancestors(grid_, deposit));
    }

    DyadicGrid grid_;
    int m_ = 0;
    int n_ = 0;
    bool cancellative_ = true;
    std::vector<ShiftTerm> terms_;
    double scale_ = 1.0;
};

/// Largest depth for which dense 2^N x 2^N matrices are assembled.
inline constexpr int kDenseDepthGuard = 12;

/// Dense kernel T with (sha f)_i = sum_j T_ij f_j, assembled term by term.
inline Eigen::MatrixXd shift_as_matrix(const HaarShift& sha, int depth_guard = kDenseDepthGuard) {
    const auto& g = sha.grid();
    if (g.depth() > depth_guard) {
        throw std::invalid_argument("shift_as_matrix: depth " + std::to_string(g.depth()) + " exceeds guard " +
                                    std::to_string(depth_guard));
    }
    const auto n = static_cast<Eigen::Index>(g.leaf_count());
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(n, n);
    const double h_leaf = g.leaf_length();
    auto profile_at = [&g](Cube c, Profile p, std::size_t leaf) {
        if (g.is_leaf(c)) return p.left;
        return leaf < g.first_leaf(DyadicGrid::right_child(c)) ? p.left : p.right;
    };
    for (const auto& term : sha.terms()) {
        const double amp = sha.scale() * term.coeff * h_leaf / DyadicGrid::length(term.block);
        for (std::size_t x = g.first_leaf(term.out); x < g.end_leaf(term.out); ++x) {
            const double kx = profile_at(term.out, term.k, x);
            for (std::size_t y = g.first_leaf(term.in); y < g.end_leaf(term.in); ++y) {
                t(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y)) += amp * kx * profile_at(term.in, term.h, y);
            }
        }
    }
    return t;
}

namespace detail {

inline void require_fit(const DyadicGrid& grid, int m, int n, bool cancellative) {
    if (m < 0 || n < 0) throw std::invalid_argument("shift parameters must be nonnegative");
    const int need = std::max(m, n) + (cancellative ? 1 : 0);
    if (need > grid.depth()) {
        throw std::invalid_argument("shift parameters (" + std::to_string(m) + ", " + std::to_string(n) +
                                    ") do not fit a grid of depth " + std::to_string(grid.depth()));
    }
}

inline int deepest_block_level(const DyadicGrid& grid, int m, int n, bool cancellative) {
    return grid.depth() - std::max(m, n) - (cancellative ? 1 : 0);
}

/**
 * Certified upper bound for the spectral norm of the entrywise-absolute kernel
 * sum_K |A_K| (power iteration plus a Collatz-Wielandt bound on P^T P). The kernel of
 * every sub-shift is dominated entrywise by this one, so its norm bounds them all.
 */
inline double absolute_kernel_norm_bound(const HaarShift& sha, int iterations = 200) {
    const auto& g = sha.grid();
    GridFunction v(g, 1.0);
    auto ptp = [&](const GridFunction& x) { return sha.apply_absolute(sha.apply_absolute(x), true); };
    for (int it = 0; it < iterations; ++it) {
        auto y = ptp(v);
        const double nrm = y.sup_norm();
        if (nrm == 0.0) return 0.0;
        y *= 1.0 / nrm;
        v = std::move(y);
    }
    for (auto& x : v.mutable_values()) x += 1e-9;
    const auto y = ptp(v);
    double bound = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) bound = std::max(bound, y[i] / v[i]);
    return std::sqrt(bound);
}

}  // namespace detail

/// Petermichl's (0,1) shift: A_K f = <h_K, f>(h_{K_left} - h_{K_right})/sqrt(2), L^2-normalized Haar h.
inline HaarShift petermichl_shift(const DyadicGrid& grid) {
    detail::require_fit(grid, 0, 1, true);
    std::vector<ShiftTerm> terms;
    const Profile haar{1.0, -1.0};
    for (int k = 0; k <= detail::deepest_block_level(grid, 0, 1, true); ++k) {
        for (std::size_t j = 0; j < (std::size_t{1} << k); ++j) {
            const Cube K{k, j};
            terms.push_back({K, K, DyadicGrid::left_child(K), 1.0, haar, haar});
            terms.push_back({K, K, DyadicGrid::right_child(K), -1.0, haar, haar});
        }
    }
    return HaarShift(grid, 0, 1, true, std::move(terms));
}

/// Martingale transform A_K f = eps_K <h_K, f> h_K. Signs are per cube in heap order; empty means +1.
inline HaarShift haar_multiplier(const DyadicGrid& grid, std::span<const double> signs = {}) {
    detail::require_fit(grid, 0, 0, true);
    std::vector<ShiftTerm> terms;
    const Profile haar{1.0, -1.0};
    for (int k = 0; k <= detail::deepest_block_level(grid, 0, 0, true); ++k) {
        for (std::size_t j = 0; j < (std::size_t{1} << k); ++j) {
            const Cube K{k, j};
            const double s = signs.empty() ? 1.0 : signs[DyadicGrid::index(K)];
            terms.push_back({K, K, K, s, haar, haar});
        }
    }
    return HaarShift(grid, 0, 0, true, std::move(terms));
}

inline std::vector<double> random_signs(const DyadicGrid& grid, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution coin(0.5);
    std::vector<double> s(grid.cube_count());
    for (auto& x : s) x = coin(rng) ? 1.0 : -1.0;
    return s;
}

/**
 * Random shift: coefficients uniform in [-1,1]; cancellative profiles are (a, -a) with
 * a uniform in [-1,1], otherwise both child values are drawn independently. A
 * non-cancellative shift is rescaled by the certified absolute-kernel bound so every
 * sub-shift is an L^2 contraction; cancellative shifts are contractions already.
 */
inline HaarShift random_shift(const DyadicGrid& grid, int m, int n, std::uint64_t seed, bool cancellative) {
    detail::require_fit(grid, m, n, cancellative);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    auto profile = [&](Cube c) {
        if (cancellative) {
            const double a = unit(rng);
            return Profile{a, -a};
        }
        if (grid.is_leaf(c)) {
            const double a = unit(rng);
            return Profile{a, a};
        }
        const double a = unit(rng);
        return Profile{a, unit(rng)};
    };
    std::vector<ShiftTerm> terms;
    for (int k = 0; k <= detail::deepest_block_level(grid, m, n, cancellative); ++k) {
        for (std::size_t j = 0; j < (std::size_t{1} << k); ++j) {
            const Cube K{k, j};
            for (std::size_t i = 0; i < (std::size_t{1} << m); ++i) {
                const Cube I{k + m, (j << m) + i};
                for (std::size_t jj = 0; jj < (std::size_t{1} << n); ++jj) {
                    const Cube J{k + n, (j << n) + jj};
                    const double c = unit(rng);
                    const Profile h = profile(I);
                    const Profile kk = profile(J);
                    terms.push_back({K, I, J, c, h, kk});
                }
            }
        }
    }
    HaarShift sha(grid, m, n, cancellative, terms);
    if (cancellative) return sha;
    const double bound = detail::absolute_kernel_norm_bound(sha);
    return HaarShift(grid, m, n, cancellative, std::move(terms), bound > 1.0 ? 1.0 / bound : 1.0);
}

/// Shift specification as read from JSON.
struct ShiftSpec {
    int m = 0;
    int n = 1;
    ShiftKind kind = ShiftKind::petermichl;
    std::uint64_t seed = 0;
    bool cancellative = true;
    bool random_signs = false;  // haar_multiplier only
};

inline HaarShift build_shift(const DyadicGrid& grid, const ShiftSpec& spec) {
    switch (spec.kind) {
        case ShiftKind::petermichl:
            if (spec.m != 0 || spec.n != 1) throw std::invalid_argument("the Petermichl shift has parameters (0, 1)");
            return petermichl_shift(grid);
        case ShiftKind::haar_multiplier: {
            if (spec.m != 0 || spec.n != 0) throw std::invalid_argument("a Haar multiplier has parameters (0, 0)");
            if (!spec.random_signs) return haar_multiplier(grid);
            const auto s = random_signs(grid, spec.seed);
            return haar_multiplier(grid, s);
        }
        case ShiftKind::random: return random_shift(grid, spec.m, spec.n, spec.seed, spec.cancellative);
    }
    throw std::invalid_argument("unknown shift kind");
}

/// The operator that is identically zero on the grid (no blocks).
inline HaarShift zero_shift(const DyadicGrid& grid) { return HaarShift(grid, 0, 0, true, {}); }

/// Order-k commutator T_b^k f with T_b^0 = T and T_b^k = [b, T_b^{k-1}].
inline GridFunction commutator_apply(const GridFunction& b, const HaarShift& sha, const GridFunction& f, int order) {
    if (order < 1) throw std::invalid_argument("commutator order must be at least 1");
    std::function<GridFunction(const GridFunction&, int)> rec = [&](const GridFunction& x, int k) -> GridFunction {
        if (k == 0) return sha.apply(x);
        return b * rec(x, k - 1) - rec(b * x, k - 1);
    };
    return rec(f, order);
}

/// Dense matrix of the order-k commutator.
inline Eigen::MatrixXd commutator_matrix(const GridFunction& b, const Eigen::MatrixXd& t, int order) {
    if (order < 1) throw std::invalid_argument("commutator order must be at least 1");
    const Eigen::VectorXd bv = Eigen::Map<const Eigen::VectorXd>(b.values().data(), static_cast<Eigen::Index>(b.size()));
    Eigen::MatrixXd c = t;
    for (int k = 0; k < order; ++k) c = bv.asDiagonal() * c - c * bv.asDiagonal();
    return c;
}

}  // namespace dyadlab

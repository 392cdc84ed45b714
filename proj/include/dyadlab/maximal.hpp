#pragma once

/**
 * @file maximal.hpp
 * @brief Dyadic maximal operators and the weak L^{1,oo} quasi-norm.
 *
 * Every maximal function here is a leaf-wise supremum of a per-cube average over the
 * cubes containing the leaf, so each costs one bottom-up sum plus one top-down sweep.
 */

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "dyadlab/grid.hpp"

namespace dyadlab {

/// (M_d f)(x) = max over dyadic Q containing x of <|f|>_Q.
inline GridFunction dyadic_maximal(const GridFunction& f) {
    const auto& g = f.grid();
    std::vector<double> a(f.size());
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = std::fabs(f[i]);
    const auto means = cube_means(g, a);
    return GridFunction(g, sup_over_ancestors(g, means));
}

/// (M_{d,sigma} f)(x) = max over Q containing x of sigma(Q)^{-1} integral_Q |f| sigma.
inline GridFunction weighted_maximal(const GridFunction& f, const Weight& sigma) {
    const auto& g = f.grid();
    if (!(g == sigma.grid())) throw std::invalid_argument("weighted_maximal: grid mismatch");
    std::vector<double> fs(f.size());
    for (std::size_t i = 0; i < fs.size(); ++i) fs[i] = std::fabs(f[i]) * sigma[i];
    auto num = cube_sums(g, fs);
    const auto den = sigma.cube_sums();
    for (std::size_t i = 0; i < num.size(); ++i) num[i] /= den[i];
    return GridFunction(g, sup_over_ancestors(g, num));
}

/// Logarithmic maximal function: sup over containing Q of exp(mean of log|f| over Q).
/// A zero value sends the geometric mean of every cube containing it to 0.
inline GridFunction log_maximal(const GridFunction& f) {
    const auto& g = f.grid();
    std::vector<double> logs(f.size());
    std::vector<double> zeros(f.size());
    for (std::size_t i = 0; i < logs.size(); ++i) {
        const double a = std::fabs(f[i]);
        if (a == 0.0) {
            zeros[i] = 1.0;
        } else {
            logs[i] = std::log(a);
        }
    }
    const auto means = cube_means(g, logs);
    const auto zero_count = cube_sums(g, zeros);
    std::vector<double> geo(means.size());
    for (std::size_t i = 0; i < geo.size(); ++i) geo[i] = zero_count[i] > 0.0 ? 0.0 : std::exp(means[i]);
    return GridFunction(g, sup_over_ancestors(g, geo));
}

/// M_r w = (M_d(w^r))^{1/r}.
inline GridFunction mr_maximal(const Weight& w, double r) {
    if (!(r > 1.0)) throw std::invalid_argument("mr_maximal requires r > 1");
    auto m = dyadic_maximal(w.pow(r).as_function());
    for (auto& v : m.mutable_values()) v = std::pow(v, 1.0 / r);
    return m;
}

/// sup_lambda lambda * w({|g| > lambda}), evaluated at the closed levels {|g| >= v}.
inline double weak_quasinorm(const GridFunction& g, const Weight& w) {
    if (!(g.grid() == w.grid())) throw std::invalid_argument("weak_quasinorm: grid mismatch");
    std::vector<std::size_t> order(g.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return std::fabs(g[a]) > std::fabs(g[b]); });
    const double h = g.grid().leaf_length();
    double mass = 0.0, best = 0.0;
    for (std::size_t k = 0; k < order.size(); ++k) {
        const double v = std::fabs(g[order[k]]);
        mass += w[order[k]] * h;
        // only evaluate once every leaf with this value is included
        if (k + 1 < order.size() && std::fabs(g[order[k + 1]]) == v) continue;
        best = std::max(best, v * mass);
    }
    return best;
}

/// ||f||_{L^p(w)} for p > 0.
inline double weighted_lp_norm(const GridFunction& f, const Weight& w, double p) {
    if (!(f.grid() == w.grid())) throw std::invalid_argument("weighted_lp_norm: grid mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) s += std::pow(std::fabs(f[i]), p) * w[i];
    return std::pow(s * f.grid().leaf_length(), 1.0 / p);
}

}  // namespace dyadlab

#pragma once

/**
 * @file constants.hpp
 * @brief Weight functionals, BMO norms, reverse Holder checks and weighted operator norms.
 *
 * All suprema are exact maxima over the 2^{N+1}-1 cubes of the grid, evaluated from
 * cached per-cube sums. Localized maximal integrals (the Wilson constant, the L log L
 * lemma, Sawyer testing) use one sweep per level, O(N 2^N) overall.
 */

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

#include "dyadlab/grid.hpp"
#include "dyadlab/maximal.hpp"
#include "dyadlab/shift.hpp"

namespace dyadlab {

namespace detail {

/// Calls fn(index, cube) for every cube in heap order.
template <class Fn>
void for_each_cube(const DyadicGrid& g, Fn&& fn) {
    for (std::size_t i = 0; i < g.cube_count(); ++i) fn(i, DyadicGrid::cube_at(i));
}

inline std::vector<double> leaf_map(std::span<const double> v, double (*fn)(double)) {
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = fn(v[i]);
    return out;
}

}  // namespace detail

/// Value attained by a sup over cubes together with a maximizing cube.
struct CubeMax {
    double value = 0.0;
    Cube cube;
};

/// [w]_{A_p} = max_Q <w>_Q <w^{-1/(p-1)}>_Q^{p-1}.
inline CubeMax ap_constant_at(const Weight& w, double p) {
    const auto& g = w.grid();
    const auto sw = cube_means(g, w.values());
    const auto ss = cube_means(g, dual_weight(w, p).values());
    CubeMax best{0.0, DyadicGrid::root()};
    for (std::size_t i = 0; i < sw.size(); ++i) {
        const double v = sw[i] * std::pow(ss[i], p - 1.0);
        if (v > best.value) best = {v, DyadicGrid::cube_at(i)};
    }
    return best;
}

inline double ap_constant(const Weight& w, double p) { return ap_constant_at(w, p).value; }

/// Hruscev constant max_Q <w>_Q exp(-<log w>_Q).
inline double ainfty_hruscev(const Weight& w) {
    const auto& g = w.grid();
    const auto sw = cube_means(g, w.values());
    const auto sl = cube_means(g, detail::leaf_map(w.values(), [](double x) { return std::log(x); }));
    double best = 0.0;
    for (std::size_t i = 0; i < sw.size(); ++i) best = std::max(best, sw[i] * std::exp(-sl[i]));
    return best;
}

/**
 * Per cube Q (heap order): integral over Q of M_d(v chi_Q)^s u.
 *
 * Inside Q, M_d(v chi_Q)(x) is the largest <v>_R over R with x in R and R inside Q, so a
 * running maximum of averages from the leaves up to level(Q) gives it for every Q at
 * that level at once.
 */
inline std::vector<double> localized_maximal_integrals(const DyadicGrid& g, std::span<const double> v,
                                                       std::span<const double> u, double s = 1.0) {
    if (v.size() != g.leaf_count() || u.size() != g.leaf_count()) {
        throw std::invalid_argument("localized_maximal_integrals: wrong lengths");
    }
    const auto means = cube_means(g, v);
    std::vector<double> run(v.begin(), v.end());
    std::vector<double> out(g.cube_count(), 0.0);
    std::vector<double> powed(run.size());
    const double h = g.leaf_length();
    for (int k = g.depth(); k >= 0; --k) {
        const std::size_t span = std::size_t{1} << (g.depth() - k);
        for (std::size_t j = 0; j < (std::size_t{1} << k); ++j) {
            const Cube c{k, j};
            const double a = means[DyadicGrid::index(c)];
            double acc = 0.0;
            for (std::size_t x = j * span; x < (j + 1) * span; ++x) {
                run[x] = std::max(run[x], a);
                acc += (s == 1.0 ? run[x] : std::pow(run[x], s)) * u[x];
            }
            out[DyadicGrid::index(c)] = acc * h;
        }
    }
    return out;
}

/// Per cube: integral over Q of M_d(w chi_Q).
inline std::vector<double> wilson_integrals(const Weight& w) {
    const std::vector<double> ones(w.size(), 1.0);
    return localized_maximal_integrals(w.grid(), w.values(), ones);
}

/// Wilson constant max_Q w(Q)^{-1} integral_Q M_d(w chi_Q).
inline CubeMax ainfty_wilson_at(const Weight& w) {
    const auto ints = wilson_integrals(w);
    CubeMax best{0.0, DyadicGrid::root()};
    for (std::size_t i = 0; i < ints.size(); ++i) {
        const double v = ints[i] / (w.cube_sums()[i] * w.grid().leaf_length());
        if (v > best.value) best = {v, DyadicGrid::cube_at(i)};
    }
    return best;
}

inline double ainfty_wilson(const Weight& w) { return ainfty_wilson_at(w).value; }

struct TwoWeightConstants {
    double bp = 0.0;
    double ap_pair = 0.0;
};

/// B_p[w,sigma] = max_Q <w><sigma>^p exp(-<log sigma>) and A_p[w,sigma] = max_Q <w><sigma>^{p-1}.
inline TwoWeightConstants two_weight_bp(const Weight& w, const Weight& sigma, double p) {
    if (!(p > 1.0)) throw std::invalid_argument("two_weight_bp requires p > 1");
    if (!(w.grid() == sigma.grid())) throw std::invalid_argument("two_weight_bp: grid mismatch");
    const auto& g = w.grid();
    const auto sw = cube_means(g, w.values());
    const auto ss = cube_means(g, sigma.values());
    const auto sl = cube_means(g, detail::leaf_map(sigma.values(), [](double x) { return std::log(x); }));
    TwoWeightConstants out;
    for (std::size_t i = 0; i < sw.size(); ++i) {
        const double base = sw[i] * std::pow(ss[i], p - 1.0);
        out.ap_pair = std::max(out.ap_pair, base);
        out.bp = std::max(out.bp, base * ss[i] * std::exp(-sl[i]));
    }
    return out;
}

/// [w]_{A_1} = max_Q <w>_Q / min_Q w.
inline double a1_constant(const Weight& w) {
    const auto& g = w.grid();
    const auto means = cube_means(g, w.values());
    std::vector<double> mins(g.cube_count());
    const std::size_t base = g.leaf_count() - 1;
    for (std::size_t i = 0; i < g.leaf_count(); ++i) mins[base + i] = w[i];
    for (std::size_t i = base; i-- > 0;) mins[i] = std::min(mins[2 * i + 1], mins[2 * i + 2]);
    double best = 0.0;
    for (std::size_t i = 0; i < means.size(); ++i) best = std::max(best, means[i] / mins[i]);
    return best;
}

/// Dimensional constant tau = 2^{11+d} of the sharp reverse Holder exponent, d = 1.
inline constexpr double kRhiTau = 4096.0;

/// r(w) = 1 + 1/(tau [w]'_{A_oo}).
inline double rhi_exponent(const Weight& w, double tau = kRhiTau) {
    if (!(tau > 0.0)) throw std::invalid_argument("rhi_exponent: tau must be positive");
    return 1.0 + 1.0 / (tau * ainfty_wilson(w));
}

struct RhiCheck {
    bool holds = true;
    double worst_ratio = 0.0;
    Cube worst_cube;
};

/// max_Q <w^r>_Q^{1/r} / <w>_Q; holds iff at most `limit` (2 in the theorem).
inline RhiCheck rhi_verify(const Weight& w, double r, double limit = 2.0) {
    if (!(r > 1.0)) throw std::invalid_argument("rhi_verify requires r > 1");
    const auto& g = w.grid();
    const auto sw = cube_means(g, w.values());
    // w^r computed as w * exp((r-1) log w) keeps precision when r is within 1e-4 of 1
    std::vector<double> wr(w.size());
    for (std::size_t i = 0; i < wr.size(); ++i) wr[i] = w[i] * std::exp((r - 1.0) * std::log(w[i]));
    const auto sr = cube_means(g, wr);
    RhiCheck out{true, 0.0, DyadicGrid::root()};
    for (std::size_t i = 0; i < sw.size(); ++i) {
        const double ratio = std::pow(sr[i], 1.0 / r) / sw[i];
        if (ratio > out.worst_ratio) {
            out.worst_ratio = ratio;
            out.worst_cube = DyadicGrid::cube_at(i);
        }
    }
    out.holds = out.worst_ratio <= limit;
    return out;
}

/// K r' : the constant-free core of the converse reverse Holder bound.
inline double rhi_inverse_bound(double k, double r) {
    if (!(k >= 1.0) || !(r > 1.0)) throw std::invalid_argument("rhi_inverse_bound requires K >= 1, r > 1");
    return k * r / (r - 1.0);
}

/**
 * Per cube: min_c w(Q)^{-1} integral_Q |f - c| w, attained at a w-weighted median.
 *
 * The leaves of each cube are kept sorted by value; sorted runs are merged level by
 * level, so all cubes cost O(N 2^N) in total.
 */
inline std::vector<double> bmo_oscillations(const GridFunction& f, const Weight* w = nullptr) {
    const auto& g = f.grid();
    if (w && !(w->grid() == g)) throw std::invalid_argument("bmo_norm: grid mismatch");
    struct Atom {
        double value;
        double mass;
    };
    std::vector<Atom> cur(f.size()), next(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) cur[i] = {f[i], w ? (*w)[i] : 1.0};
    std::vector<double> out(g.cube_count(), 0.0);
    auto by_value = [](const Atom& a, const Atom& b) { return a.value < b.value; };
    for (int k = g.depth(); k >= 0; --k) {
        const std::size_t span = std::size_t{1} << (g.depth() - k);
        for (std::size_t j = 0; j < (std::size_t{1} << k); ++j) {
            const auto lo = cur.begin() + static_cast<std::ptrdiff_t>(j * span);
            const auto hi = lo + static_cast<std::ptrdiff_t>(span);
            if (span > 1) {
                const auto mid = lo + static_cast<std::ptrdiff_t>(span / 2);
                std::merge(lo, mid, mid, hi, next.begin() + static_cast<std::ptrdiff_t>(j * span), by_value);
                std::copy(next.begin() + static_cast<std::ptrdiff_t>(j * span),
                          next.begin() + static_cast<std::ptrdiff_t>((j + 1) * span), lo);
            }
            double total = 0.0;
            for (auto it = lo; it != hi; ++it) total += it->mass;
            double acc = 0.0, median = lo->value;
            for (auto it = lo; it != hi; ++it) {
                acc += it->mass;
                if (acc >= 0.5 * total) {
                    median = it->value;
                    break;
                }
            }
            double dev = 0.0;
            for (auto it = lo; it != hi; ++it) dev += it->mass * std::fabs(it->value - median);
            out[DyadicGrid::index(Cube{k, j})] = dev / total;
        }
    }
    return out;
}

/// ||f||_{BMO(w)} (unweighted when w is null).
inline double bmo_norm(const GridFunction& f, const Weight* w = nullptr) {
    const auto osc = bmo_oscillations(f, w);
    return *std::max_element(osc.begin(), osc.end());
}

inline double bmo_norm(const GridFunction& f, const Weight& w) { return bmo_norm(f, &w); }

/// Per cube: integral over Q of w log(e + w/<w>_Q).
inline std::vector<double> llogl_integrals(const Weight& w) {
    const auto& g = w.grid();
    std::vector<double> out(g.cube_count());
    const double h = g.leaf_length();
    detail::for_each_cube(g, [&](std::size_t i, Cube c) {
        const double avg = w.average(c);
        double acc = 0.0;
        for (std::size_t x = g.first_leaf(c); x < g.end_leaf(c); ++x) acc += w[x] * std::log(std::exp(1.0) + w[x] / avg);
        out[i] = acc * h;
    });
    return out;
}

/// max_Q mean over Q of exp(alpha |b - <b>_Q| / ||b||_BMO); 1 when b is constant.
inline double john_nirenberg_functional(const GridFunction& b, double alpha) {
    const double norm = bmo_norm(b);
    if (norm == 0.0) return 1.0;
    const auto& g = b.grid();
    const auto means = cube_means(g, b.values());
    double best = 0.0;
    detail::for_each_cube(g, [&](std::size_t i, Cube c) {
        double acc = 0.0;
        for (std::size_t x = g.first_leaf(c); x < g.end_leaf(c); ++x) {
            acc += std::exp(alpha * std::fabs(b[x] - means[i]) / norm);
        }
        best = std::max(best, acc / static_cast<double>(g.span_of(c)));
    });
    return best;
}

/// Smallest A with sum_{Q inside R} a_Q <= A sigma(R) for every R (a in heap order).
inline double carleson_constant(std::span<const double> a, const Weight& sigma) {
    const auto& g = sigma.grid();
    if (a.size() != g.cube_count()) throw std::invalid_argument("carleson_constant: wrong length");
    std::vector<double> sub(a.begin(), a.end());
    for (std::size_t i = g.leaf_count() - 1; i-- > 0;) sub[i] += sub[2 * i + 1] + sub[2 * i + 2];
    double best = 0.0;
    for (std::size_t i = 0; i < sub.size(); ++i) best = std::max(best, sub[i] / sigma.mass(DyadicGrid::cube_at(i)));
    return best;
}

/// sum_Q a_Q (<f>^sigma_Q)^p with sigma-averages of |f|.
inline double carleson_sum(std::span<const double> a, const GridFunction& f, const Weight& sigma, double p) {
    const auto& g = sigma.grid();
    std::vector<double> fs(f.size());
    for (std::size_t i = 0; i < fs.size(); ++i) fs[i] = std::fabs(f[i]) * sigma[i];
    const auto num = cube_sums(g, fs);
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * std::pow(num[i] / sigma.cube_sums()[i], p);
    return s;
}

// ---------------------------------------------------------------------------
// Operator norms

/// Any (sub)linear operator on grid functions.
using Operator = std::function<GridFunction(const GridFunction&)>;

inline Operator as_operator(const HaarShift& sha) {
    return [&sha](const GridFunction& f) { return sha.apply(f); };
}

inline Operator maximal_operator() {
    return [](const GridFunction& f) { return dyadic_maximal(f); };
}

/// Largest singular value of D^{1/2} T D^{-1/2}: the exact norm of T on L^2(w).
inline double weighted_l2_norm_exact(const Eigen::MatrixXd& t, const Weight& w) {
    const auto n = static_cast<Eigen::Index>(w.size());
    if (t.rows() != n || t.cols() != n) throw std::invalid_argument("weighted_l2_norm_exact: size mismatch");
    Eigen::VectorXd d(n);
    for (Eigen::Index i = 0; i < n; ++i) d[i] = std::sqrt(w[static_cast<std::size_t>(i)]);
    const Eigen::MatrixXd b = d.asDiagonal() * t * d.cwiseInverse().asDiagonal();
    if (b.isZero(0.0)) return 0.0;
    // only the lower triangle of B^T B is formed; the solver reads nothing else
    Eigen::MatrixXd btb = Eigen::MatrixXd::Zero(n, n);
    btb.selfadjointView<Eigen::Lower>().rankUpdate(b.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(btb, Eigen::EigenvaluesOnly);
    return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

inline double weighted_l2_norm_exact(const HaarShift& sha, const Weight& w, int depth_guard = kDenseDepthGuard) {
    return weighted_l2_norm_exact(shift_as_matrix(sha, depth_guard), w);
}

struct NormEstimate {
    double value = 0.0;
    GridFunction best;
};

/**
 * Lower bound for the norm of T on L^p(w): the best ratio over cube indicators, the
 * testing functions sigma chi_Q (sigma = w^{1-p'}), and `budget` steps of seeded random
 * ascent from the best candidate. The random stream does not depend on the budget, so
 * the result is nondecreasing in it.
 */
inline NormEstimate weighted_lp_norm_estimate(const Operator& op, const Weight& w, double p, int budget = 0,
                                              std::uint64_t seed = 0) {
    if (!(p > 1.0)) throw std::invalid_argument("weighted_lp_norm_estimate requires p > 1");
    const auto& g = w.grid();
    const Weight sigma = dual_weight(w, p);
    NormEstimate out{0.0, GridFunction(g)};
    auto ratio = [&](const GridFunction& f) {
        const double den = weighted_lp_norm(f, w, p);
        if (den == 0.0) return 0.0;
        return weighted_lp_norm(op(f), w, p) / den;
    };
    auto consider = [&](GridFunction f) {
        const double r = ratio(f);
        if (r > out.value) {
            out.value = r;
            out.best = std::move(f);
        }
    };
    detail::for_each_cube(g, [&](std::size_t, Cube c) {
        consider(GridFunction::indicator(g, c));
        GridFunction s(g);
        for (std::size_t i = g.first_leaf(c); i < g.end_leaf(c); ++i) s[i] = sigma[i];
        consider(std::move(s));
    });

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_int_distribution<std::size_t> pick(0, g.cube_count() - 1);
    GridFunction cur = out.best;
    double cur_ratio = out.value;
    for (int it = 0; it < budget; ++it) {
        const double step = 0.5 / std::sqrt(1.0 + it);
        GridFunction cand = cur;
        const double scale = cand.sup_norm() > 0.0 ? cand.sup_norm() : 1.0;
        for (std::size_t i = 0; i < cand.size(); ++i) cand[i] += step * scale * gauss(rng) * (std::fabs(cand[i]) / scale + 0.1);
        const Cube c = DyadicGrid::cube_at(pick(rng));
        const double bump = step * scale * gauss(rng);
        for (std::size_t i = g.first_leaf(c); i < g.end_leaf(c); ++i) cand[i] += bump;
        const double r = ratio(cand);
        if (r > cur_ratio) {
            cur = cand;
            cur_ratio = r;
            if (r > out.value) {
                out.value = r;
                out.best = std::move(cand);
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Report

struct ConstantsReport {
    double p = 2.0;
    double ap = 1.0;
    double ainfty_hruscev = 1.0;
    double ainfty_wilson = 1.0;
    double dual_ap = 1.0;
    double dual_ainfty_hruscev = 1.0;
    double dual_ainfty_wilson = 1.0;
    double a_p_pair = 1.0;
    double b_p_pair = 1.0;
    double rhi_exponent = 1.0 + 1.0 / kRhiTau;
    double a1 = 1.0;

    /// Report with every weight constant equal to 1.
    static ConstantsReport ones(double p = 2.0) {
        ConstantsReport r;
        r.p = p;
        return r;
    }
};

inline ConstantsReport compute_report(const Weight& w, double p = 2.0) {
    if (!(p > 1.0)) throw std::invalid_argument("compute_report requires p > 1");
    const Weight sigma = dual_weight(w, p);
    ConstantsReport r;
    r.p = p;
    r.ap = ap_constant(w, p);
    r.ainfty_hruscev = ainfty_hruscev(w);
    r.ainfty_wilson = ainfty_wilson(w);
    r.dual_ap = ap_constant(sigma, conjugate(p));
    r.dual_ainfty_hruscev = ainfty_hruscev(sigma);
    r.dual_ainfty_wilson = ainfty_wilson(sigma);
    const auto pair = two_weight_bp(w, sigma, p);
    r.a_p_pair = pair.ap_pair;
    r.b_p_pair = pair.bp;
    r.rhi_exponent = 1.0 + 1.0 / (kRhiTau * r.ainfty_wilson);
    r.a1 = a1_constant(w);
    return r;
}

}  // namespace dyadlab

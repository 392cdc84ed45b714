#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "dyadlab/constants.hpp"
#include "dyadlab/random.hpp"
#include "dyadlab/weight_family.hpp"

using namespace dyadlab;

namespace {

// sup over cubes Q of w(Q)^{-1} sum over x in Q of max over R with x in R inside Q of <w>_R
double brute_wilson(const Weight& w) {
    const auto& g = w.grid();
    double best = 0.0;
    for (std::size_t q = 0; q < g.cube_count(); ++q) {
        const Cube Q = DyadicGrid::cube_at(q);
        double integral = 0.0;
        for (std::size_t x = g.first_leaf(Q); x < g.end_leaf(Q); ++x) {
            double m = 0.0;
            for (int lev = Q.level; lev <= g.depth(); ++lev) m = std::max(m, w.average(g.ancestor_of_leaf(x, lev)));
            integral += m * g.leaf_length();
        }
        best = std::max(best, integral / w.mass(Q));
    }
    return best;
}

// inf over c of the weighted L^1 deviation, by scanning every leaf value as candidate
double brute_bmo(const GridFunction& f, const Weight& w) {
    const auto& g = f.grid();
    double best = 0.0;
    for (std::size_t q = 0; q < g.cube_count(); ++q) {
        const Cube Q = DyadicGrid::cube_at(q);
        double inner = INFINITY;
        for (std::size_t c = g.first_leaf(Q); c < g.end_leaf(Q); ++c) {
            double s = 0.0;
            for (std::size_t x = g.first_leaf(Q); x < g.end_leaf(Q); ++x) s += std::fabs(f[x] - f[c]) * w[x];
            inner = std::min(inner, s / (w.average(Q) * g.span_of(Q)));
        }
        best = std::max(best, inner);
    }
    return best;
}

Weight two_valued(double t, int depth) { return materialize(TwoValuedFamily{t, LeafSet::left()}, DyadicGrid(depth)); }

}  // namespace

TEST(Ap, Examples) {
    EXPECT_DOUBLE_EQ(ap_constant(Weight::constant(DyadicGrid(4), 3.0), 2.0), 1.0);
    EXPECT_NEAR(ap_constant(two_valued(3.0, 5), 2.0), 4.0 / 3.0, 1e-14);
    EXPECT_DOUBLE_EQ(ap_constant(Weight(DyadicGrid(1), {4, 1}), 2.0), 25.0 / 16.0);
    EXPECT_THROW(ap_constant(Weight::constant(DyadicGrid(1), 1.0), 1.0), std::invalid_argument);
}

TEST(Ap, DualitySymmetry) {
    Rng rng(20);
    DyadicGrid g(7);
    for (double p : {1.5, 2.0, 3.0, 5.0}) {
        for (int t = 0; t < 20; ++t) {
            const Weight w = random_weight(g, rng);
            const double a = ap_constant(w, p);
            const double b = std::pow(ap_constant(dual_weight(w, p), conjugate(p)), p - 1.0);
            EXPECT_NEAR(a, b, 1e-10 * a);
        }
    }
}

TEST(Hruscev, Examples) {
    EXPECT_NEAR(ainfty_hruscev(Weight::constant(DyadicGrid(3), 7.0)), 1.0, 1e-15);
    EXPECT_NEAR(ainfty_hruscev(two_valued(4.0, 6)), 1.25, 1e-14);
    EXPECT_NEAR(ainfty_hruscev(Weight(DyadicGrid(1), {4, 1})), 1.25, 1e-15);
}

TEST(Wilson, Examples) {
    EXPECT_NEAR(ainfty_wilson(Weight::constant(DyadicGrid(5), 2.0)), 1.0, 1e-15);
    EXPECT_NEAR(ainfty_wilson(two_valued(3.0, 1)), 1.25, 1e-15);
    // left-half two-valued weight on any depth: the root gives (3t+1)/(2(t+1))
    for (double t : {2.0, 10.0, 1000.0}) {
        EXPECT_NEAR(ainfty_wilson(two_valued(t, 7)), (3 * t + 1) / (2 * (t + 1)), 1e-13);
    }
}

TEST(Wilson, MatchesBruteForce) {
    Rng rng(21);
    for (int n : {0, 1, 3, 6}) {
        DyadicGrid g(n);
        for (int t = 0; t < 15; ++t) {
            const Weight w = random_weight(g, rng);
            EXPECT_NEAR(ainfty_wilson(w), brute_wilson(w), 1e-12 * brute_wilson(w));
        }
    }
}

TEST(TwoWeight, Examples) {
    DyadicGrid g(3);
    const auto one = two_weight_bp(Weight::constant(g, 1.0), Weight::constant(g, 1.0), 2.5);
    EXPECT_DOUBLE_EQ(one.bp, 1.0);
    Rng rng(22);
    const Weight w = random_weight(g, rng);
    const auto s1 = two_weight_bp(w, Weight::constant(g, 1.0), 3.0);
    const auto means = cube_means(g, w.values());
    const double maxavg = *std::max_element(means.begin(), means.end());
    EXPECT_NEAR(s1.bp, maxavg, 1e-13 * maxavg);
    EXPECT_NEAR(s1.ap_pair, maxavg, 1e-13 * maxavg);
    DyadicGrid g1(1);
    EXPECT_NEAR(two_weight_bp(Weight(g1, {4, 1}), Weight(g1, {1, 4}), 2.0).bp, 125.0 / 16.0, 1e-13);
}

TEST(A1, Examples) {
    DyadicGrid g(1);
    EXPECT_DOUBLE_EQ(a1_constant(Weight(g, {4, 1})), 2.5);
    EXPECT_DOUBLE_EQ(a1_constant(Weight::constant(g, 3.0)), 1.0);
}

TEST(Rhi, ExponentExamples) {
    EXPECT_DOUBLE_EQ(rhi_exponent(Weight::constant(DyadicGrid(4), 1.0)), 1.0 + 1.0 / 4096.0);
    const Weight w = two_valued(3.0, 1);
    EXPECT_NEAR(rhi_exponent(w), 1.0 + 1.0 / 5120.0, 1e-15);
    const double r = rhi_exponent(w);
    EXPECT_NEAR(conjugate(r), 1.0 + 4096.0 * ainfty_wilson(w), 1e-8);
}

TEST(Rhi, VerifyExamples) {
    const auto one = rhi_verify(Weight::constant(DyadicGrid(3), 5.0), 3.0);
    EXPECT_NEAR(one.worst_ratio, 1.0, 1e-14);
    EXPECT_TRUE(one.holds);
    const auto ex = rhi_verify(Weight(DyadicGrid(1), {4, 1}), 2.0);
    EXPECT_NEAR(ex.worst_ratio, std::sqrt(17.0 / 2.0) / 2.5, 1e-14);
    EXPECT_EQ(ex.worst_cube, DyadicGrid::root());
    EXPECT_THROW(rhi_verify(Weight::constant(DyadicGrid(1), 1.0), 1.0), std::invalid_argument);
}

TEST(Rhi, InverseBound) {
    EXPECT_DOUBLE_EQ(rhi_inverse_bound(1.0, 2.0), 2.0);
    EXPECT_DOUBLE_EQ(rhi_inverse_bound(2.0, 1.5), 6.0);
    EXPECT_THROW(rhi_inverse_bound(0.5, 2.0), std::invalid_argument);
}

TEST(Bmo, Examples) {
    DyadicGrid g(1);
    EXPECT_EQ(bmo_norm(GridFunction(DyadicGrid(4), 3.0)), 0.0);
    const double t = std::exp(2.0);
    EXPECT_NEAR(bmo_norm(GridFunction(g, {std::log(t), 0.0})), 1.0, 1e-15);
    EXPECT_NEAR(bmo_norm(GridFunction(g, {std::log(5.0), 0.0})), std::log(5.0) / 2, 1e-15);
}

TEST(Bmo, MatchesBruteForce) {
    Rng rng(23);
    DyadicGrid g(6);
    for (int t = 0; t < 15; ++t) {
        const auto f = random_function(g, rng);
        const Weight w = random_weight(g, rng);
        EXPECT_NEAR(bmo_norm(f, w), brute_bmo(f, w), 1e-12);
        EXPECT_NEAR(bmo_norm(f), brute_bmo(f, Weight::constant(g, 1.0)), 1e-12);
    }
}

TEST(ExactL2, Examples) {
    Rng rng(24);
    DyadicGrid g(5);
    const Weight w = random_weight(g, rng);
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(32, 32);
    EXPECT_NEAR(weighted_l2_norm_exact(id, w), 1.0, 1e-12);
    EXPECT_EQ(weighted_l2_norm_exact(zero_shift(g), w), 0.0);
    EXPECT_LE(weighted_l2_norm_exact(petermichl_shift(g), Weight::constant(g, 1.0)), 1.0 + 1e-12);
    EXPECT_THROW(weighted_l2_norm_exact(petermichl_shift(DyadicGrid(13)), Weight::constant(DyadicGrid(13), 1.0)),
                 std::invalid_argument);
}

TEST(ExactL2, AgreesWithSvd) {
    Rng rng(25);
    DyadicGrid g(5);
    const auto sha = random_shift(g, 1, 1, 4, true);
    const Weight w = random_weight(g, rng);
    const auto t = shift_as_matrix(sha);
    Eigen::VectorXd d(32);
    for (int i = 0; i < 32; ++i) d[i] = std::sqrt(w[i]);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(d.asDiagonal() * t * d.cwiseInverse().asDiagonal());
    EXPECT_NEAR(weighted_l2_norm_exact(t, w), svd.singularValues()[0], 1e-10);
}

TEST(Estimate, Examples) {
    DyadicGrid g(5);
    const auto e = weighted_lp_norm_estimate(maximal_operator(), Weight::constant(g, 1.0), 2.0);
    EXPECT_GE(e.value, 1.0);
    const Weight w = materialize(TwoValuedFamily{100.0, LeafSet::left()}, g);
    const auto cr = compute_report(w, 2.0);
    const auto m = weighted_lp_norm_estimate(maximal_operator(), w, 2.0, 50, 1);
    EXPECT_LE(m.value, 4.0 * std::numbers::e * 2.0 * std::sqrt(cr.b_p_pair));
}

TEST(Estimate, MonotoneInBudget) {
    Rng rng(26);
    DyadicGrid g(5);
    const Weight w = random_weight(g, rng);
    const auto sha = random_shift(g, 0, 1, 5, true);
    double prev = 0.0;
    for (int budget : {0, 5, 20, 60}) {
        const double v = weighted_lp_norm_estimate(as_operator(sha), w, 3.0, budget, 99).value;
        EXPECT_GE(v, prev);
        prev = v;
    }
}

TEST(Estimate, BelowExactL2) {
    Rng rng(27);
    DyadicGrid g(6);
    for (int t = 0; t < 5; ++t) {
        const Weight w = random_weight(g, rng);
        const auto sha = random_shift(g, 1, 0, 10 + t, true);
        const double exact = weighted_l2_norm_exact(sha, w);
        EXPECT_LE(weighted_lp_norm_estimate(as_operator(sha), w, 2.0, 30, t).value, exact * (1 + 1e-10));
    }
}

TEST(Report, OnesAndTwoValued) {
    const auto cr = compute_report(Weight::constant(DyadicGrid(4), 1.0), 2.0);
    for (double v : {cr.ap, cr.ainfty_hruscev, cr.ainfty_wilson, cr.dual_ap, cr.dual_ainfty_hruscev,
                     cr.dual_ainfty_wilson, cr.a_p_pair, cr.b_p_pair, cr.a1}) {
        EXPECT_NEAR(v, 1.0, 1e-14);
    }
    EXPECT_DOUBLE_EQ(cr.rhi_exponent, 1.0 + 1.0 / 4096.0);
    const auto r3 = compute_report(two_valued(3.0, 8), 2.0);
    EXPECT_NEAR(r3.ap, 4.0 / 3.0, 1e-14);
    EXPECT_NEAR(r3.a_p_pair, r3.ap, 1e-14);
}

TEST(Carleson, ConstantAndSum) {
    DyadicGrid g(1);
    const Weight s = Weight::constant(g, 1.0);
    const std::vector<double> a{0.5, 0.25, 0.25};
    EXPECT_DOUBLE_EQ(carleson_constant(a, s), 1.0);
    EXPECT_DOUBLE_EQ(carleson_sum(a, GridFunction(g, {2, 0}), s, 2.0), 0.5 * 1.0 + 0.25 * 4.0);
}

TEST(LlogL, ConstantWeight) {
    const auto v = llogl_integrals(Weight::constant(DyadicGrid(3), 2.0));
    EXPECT_NEAR(v[0], 2.0 * std::log(std::numbers::e + 1.0), 1e-14);
}

TEST(JohnNirenberg, ConstantIsOne) {
    EXPECT_EQ(john_nirenberg_functional(GridFunction(DyadicGrid(3), 4.0), 0.125), 1.0);
}

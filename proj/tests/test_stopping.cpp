#include <gtest/gtest.h>

#include "dyadlab/constants.hpp"
#include "dyadlab/maximal.hpp"
#include "dyadlab/random.hpp"
#include "dyadlab/stopping.hpp"

using namespace dyadlab;

TEST(CZ, Examples) {
    DyadicGrid g(2);
    auto a = cz_decompose(GridFunction(g, {4, 0, 0, 0}), 2.0);
    ASSERT_EQ(a.cubes.size(), 1u);
    EXPECT_EQ(a.cubes[0], (Cube{2, 0}));
    EXPECT_DOUBLE_EQ(a.averages[0], 4.0);
    EXPECT_FALSE(a.root_exceeds);

    EXPECT_TRUE(cz_decompose(GridFunction(g, 1.0), 2.0).cubes.empty());

    auto b = cz_decompose(GridFunction(g, {4, 2, 0, 0}), 1.5);
    ASSERT_EQ(b.cubes.size(), 1u);
    EXPECT_EQ(b.cubes[0], (Cube{1, 0}));
    EXPECT_DOUBLE_EQ(b.averages[0], 3.0);
}

TEST(CZ, RootFlaggedBelowRootAverage) {
    DyadicGrid g(2);
    auto d = cz_decompose(GridFunction(g, {4, 4, 4, 4}), 1.0);
    EXPECT_TRUE(d.root_exceeds);
    ASSERT_EQ(d.cubes.size(), 1u);
    EXPECT_EQ(d.cubes[0], DyadicGrid::root());
    EXPECT_THROW(cz_decompose(GridFunction(g, {1, -1, 0, 0}), 1.0), std::invalid_argument);
    EXPECT_THROW(cz_decompose(GridFunction(g, 1.0), 0.0), std::invalid_argument);
}

TEST(CZ, DisjointTwoSidedAndLevelSet) {
    Rng rng(12);
    DyadicGrid g(8);
    for (int t = 0; t < 100; ++t) {
        const Weight sigma = random_weight(g, rng);
        const auto f = random_nonnegative_function(g, rng) * sigma.as_function();
        const double root = f.integral();
        std::uniform_real_distribution<double> u(1.0, 20.0);
        const double lambda = root * u(rng);
        const auto cz = cz_decompose(f, lambda);
        EXPECT_FALSE(cz.root_exceeds);
        std::vector<int> cover(g.leaf_count(), 0);
        for (std::size_t k = 0; k < cz.cubes.size(); ++k) {
            EXPECT_GT(cz.averages[k], lambda);
            EXPECT_LE(cz.averages[k], 2.0 * lambda * (1 + 1e-12));
            for (std::size_t i = g.first_leaf(cz.cubes[k]); i < g.end_leaf(cz.cubes[k]); ++i) ++cover[i];
        }
        const auto m = dyadic_maximal(f);
        for (std::size_t i = 0; i < g.leaf_count(); ++i) {
            EXPECT_LE(cover[i], 1);
            EXPECT_EQ(cover[i] == 1, m[i] > lambda) << "leaf " << i;
        }
    }
}

TEST(Principal, ConstantWeightSingleGeneration) {
    DyadicGrid g(5);
    const auto pc = principal_cubes(Weight::constant(g, 3.0), DyadicGrid::root());
    ASSERT_EQ(pc.cubes.size(), 1u);
    EXPECT_DOUBLE_EQ(pc.e_measure[0], 1.0);
}

TEST(Principal, HandExample) {
    DyadicGrid g(2);
    const auto pc = principal_cubes(Weight(g, {8, 1, 1, 1}), DyadicGrid::root());
    ASSERT_EQ(pc.cubes.size(), 2u);
    EXPECT_EQ(pc.cubes[0], DyadicGrid::root());
    EXPECT_EQ(pc.cubes[1], (Cube{2, 0}));
    EXPECT_EQ(pc.generation[1], 1);
    EXPECT_EQ(pc.parent[1], 0u);
    EXPECT_DOUBLE_EQ(pc.sigma_average[0], 11.0 / 4.0);
    EXPECT_DOUBLE_EQ(pc.e_measure[0], 0.75);
    EXPECT_DOUBLE_EQ(pc.e_measure[1], 0.25);
}

TEST(Principal, StoppingRuleAndHalfMeasure) {
    Rng rng(13);
    DyadicGrid g(8);
    for (int t = 0; t < 100; ++t) {
        const Weight sigma = random_weight(g, rng);
        for (Cube root : {DyadicGrid::root(), Cube{2, 3}}) {
            const auto pc = principal_cubes(sigma, root);
            double total = 0.0;
            for (std::size_t s = 0; s < pc.cubes.size(); ++s) {
                EXPECT_GE(pc.e_measure[s], 0.5 * DyadicGrid::length(pc.cubes[s]) - 1e-15);
                total += pc.e_measure[s];
                if (pc.parent[s] != kNoCube) {
                    EXPECT_GT(pc.sigma_average[s], 2.0 * pc.sigma_average[pc.parent[s]]);
                    EXPECT_TRUE(DyadicGrid::contains(pc.cubes[pc.parent[s]], pc.cubes[s]));
                }
            }
            EXPECT_NEAR(total, DyadicGrid::length(root), 1e-12);
        }
    }
}

TEST(Principal, FilteredPackingAgainstWilson) {
    Rng rng(14);
    DyadicGrid g(8);
    for (int t = 0; t < 50; ++t) {
        const Weight w = random_a2_weight(g, rng);
        const Weight sigma = dual_weight(w, 2.0);
        const double wil = ainfty_wilson(w);
        const int amax = static_cast<int>(std::ceil(std::log2(ap_constant(w, 2.0)))) + 1;
        for (int a = -1; a <= amax; ++a) {
            for (int res = 0; res < 2; ++res) {
                const auto pc = principal_cubes(sigma, DyadicGrid::root(), a2_band_filter(w, sigma, a, res, 2));
                double sum = 0.0;
                for (std::size_t s = 0; s < pc.cubes.size(); ++s) {
                    sum += w.mass(pc.cubes[s]);
                    EXPECT_GE(pc.e_measure[s], 0.5 * DyadicGrid::length(pc.cubes[s]) - 1e-15);
                }
                EXPECT_LE(sum, 2.0 * wil * w.total_mass() * (1 + 1e-12));
            }
        }
    }
}

TEST(Principal, FilterRejectsBadResidue) {
    DyadicGrid g(2);
    const Weight w = Weight::constant(g, 1.0);
    EXPECT_THROW(a2_band_filter(w, w, 0, 2, 2), std::invalid_argument);
}

#include "lipsquash/planar.hpp"

#include "support/oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace lipsquash;

TEST(Fixture, FourCornerOnGridWithUnitMass)
{
    for (int n = 0; n <= 5; ++n) {
        auto fix = four_corner(n);
        EXPECT_EQ(fix.points.size(), static_cast<std::size_t>(std::pow(4, n)));
        EXPECT_NEAR(fix.natural_measure.total_mass(), 1.0, 1e-12);
        const double cell = std::pow(4.0, -n);
        EXPECT_DOUBLE_EQ(fix.cell_side, cell);
        for (const auto& p : fix.points)
            for (int k = 0; k < 2; ++k) EXPECT_NEAR(p[k] / cell, std::round(p[k] / cell), 1e-9);
        EXPECT_TRUE(fix.projection_null_certified);
    }
}

TEST(Fixture, KochIsNotCertified)
{
    auto fix = koch(3);
    EXPECT_EQ(fix.points.size(), 64u);
    EXPECT_FALSE(fix.projection_null_certified);
}

TEST(IntervalCoverTest, MergesAndSorts)
{
    auto v = merge_intervals({{0.5, 0.7}, {0.0, 0.1}, {0.1, 0.2}, {0.6, 0.9}});
    ASSERT_EQ(v.size(), 2u);
    EXPECT_EQ(v[0].a, 0.0);
    EXPECT_EQ(v[0].b, 0.2);
    EXPECT_EQ(v[1].a, 0.5);
    EXPECT_EQ(v[1].b, 0.9);
    IntervalCover c(v);
    EXPECT_NEAR(c.total_length(), 0.6, 1e-15);
    EXPECT_NEAR(c.min_gap(), 0.3, 1e-15);
    EXPECT_TRUE(c.covers(0.55));
    EXPECT_FALSE(c.covers(0.3));
}

TEST(ProjectCover, GenerationThreeQuarterBudget)
{
    auto pc = project_cover(four_corner(3), 0, 0.25);
    EXPECT_EQ(pc.generation, 2);
    EXPECT_EQ(pc.cover.size(), 4u);
    EXPECT_NEAR(pc.cover.total_length(), 0.25, 1e-15);
    for (const auto& iv : pc.cover.intervals()) EXPECT_NEAR(iv.length(), 1.0 / 16.0, 1e-15);
}

TEST(ProjectCover, GenerationFiveSmallBudget)
{
    auto pc = project_cover(four_corner(5), 1, 0.05);
    EXPECT_EQ(pc.generation, 5);
    EXPECT_NEAR(pc.cover.total_length(), 0.03125, 1e-15);
}

TEST(ProjectCover, LargeBudgetIsWholeSegment)
{
    auto pc = project_cover(four_corner(2), 0, 2.0);
    ASSERT_EQ(pc.cover.size(), 1u);
    EXPECT_EQ(pc.cover.intervals()[0].a, 0.0);
    EXPECT_EQ(pc.cover.intervals()[0].b, 1.0);
}

TEST(ProjectCover, RefinementHalvesTotal)
{
    auto fix = four_corner(4);
    for (int m = 0; m < 7; ++m)
        EXPECT_NEAR(projection_at(fix, 0, m + 1).total_length(), projection_at(fix, 0, m).total_length() / 2.0,
                    1e-14);
}

TEST(ProjectCover, UnreachableBudgetNamesRequiredGeneration)
{
    CoverOptions opts;
    opts.max_generation = 3;
    try {
        project_cover(four_corner(2), 0, 0.01, opts);
        FAIL() << "expected ParameterError";
    } catch (const ParameterError& e) {
        EXPECT_NE(std::string(e.what()).find("required m = 7"), std::string::npos) << e.what();
    }
}

TEST(GapIntegral, Examples)
{
    GapIntegralMap f(IntervalCover({{0.25, 0.75}}));
    EXPECT_DOUBLE_EQ(f(1.0), 0.5);
    GapIntegralMap id{IntervalCover{}};
    for (double t : {-2.0, 0.0, 0.3, 7.0}) EXPECT_DOUBLE_EQ(id(t), t);
    auto cover = projection_at(four_corner(2), 0, 1);
    GapIntegralMap g(cover);
    EXPECT_NEAR(g(1.0), 1.0 - cover.total_length(), 1e-15);
    EXPECT_EQ(g(0.0), 0.0);
}

TEST(GapIntegral, MatchesRiemannSumAndIsConstantOnCover)
{
    oracle::Rng rng(17);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<Interval> ivs;
        int n = rng.integer(1, 6);
        for (int i = 0; i < n; ++i) {
            double a = rng.uniform(-1.0, 2.0);
            ivs.push_back({a, a + rng.uniform(0.0, 0.4)});
        }
        IntervalCover cover(ivs);
        GapIntegralMap f(cover);
        for (int k = 0; k < 20; ++k) {
            double t = rng.uniform(-2.0, 3.0);
            // Midpoint rule on the complement indicator, exact up to the cell count at the ends.
            const int steps = 20000;
            double sum = 0.0, lo = std::min(0.0, t), hi = std::max(0.0, t);
            for (int s = 0; s < steps; ++s) {
                double u = lo + (hi - lo) * (s + 0.5) / steps;
                sum += cover.covers(u) ? 0.0 : 1.0;
            }
            double expect = (t >= 0 ? 1.0 : -1.0) * sum * (hi - lo) / steps;
            EXPECT_NEAR(f(t), expect, 2.0 * (2 * n + 1) * (hi - lo) / steps + 1e-12);
        }
        for (const auto& iv : cover.intervals()) {
            double base = f(iv.a);
            for (int k = 0; k <= 10; ++k) EXPECT_EQ(f(std::min(iv.b, iv.a + (iv.b - iv.a) * k / 10.0)), base);
        }
        for (int k = 0; k < 200; ++k) {
            double s = rng.uniform(-2.0, 3.0), t = rng.uniform(-2.0, 3.0);
            EXPECT_LE(std::abs(f(s) - f(t)), std::abs(s - t) + 1e-12);
            if (s < t) {
                EXPECT_LE(f(s), f(t));
            }
        }
    }
}

TEST(PlanarSquash, GenerationFourEighth)
{
    auto fix = four_corner(4);
    auto res = build_planar_squash(fix, 0.125);
    EXPECT_EQ(res.m_x, 3);
    EXPECT_EQ(res.m_y, 3);
    EXPECT_EQ(res.image_bound, 81u);
    EXPECT_LE(res.image.size(), 81u);
    EXPECT_LE(res.sup_deviation, std::sqrt(2.0) * 0.125);
    std::vector<Vec> img;
    for (const auto& p : fix.points) img.push_back(res.map(p));
    EXPECT_LE(oracle::pair_lipschitz(fix.points, img), 1.0 + 1e-12);
}

TEST(PlanarSquash, LargeEpsCollapsesToPoint)
{
    auto res = build_planar_squash(four_corner(3), 2.0);
    EXPECT_EQ(res.image.size(), 1u);
}

TEST(PlanarSquash, SinglePointFixture)
{
    auto fix = single_point_fixture(vec2(0.3, 0.6));
    auto res = build_planar_squash(fix, 0.1);
    EXPECT_EQ(res.image.size(), 1u);
    EXPECT_LE(res.sup_deviation, std::sqrt(2.0) * 0.1);
}

TEST(SquashReport, FourCornerRows)
{
    auto rows = squash_report(four_corner(5), {0.5, 0.25, 0.125});
    ASSERT_EQ(rows.size(), 3u);
    for (const auto& r : rows) {
        EXPECT_LE(r.sup_dev, std::sqrt(2.0) * r.eps);
        EXPECT_TRUE(r.certified);
        EXPECT_TRUE(r.flag.empty());
        EXPECT_GE(r.h1_content_upper, 0.0);
    }
}

TEST(SquashReport, EmptyList)
{
    EXPECT_TRUE(squash_report(four_corner(2), {}).empty());
}

TEST(SquashReport, KochFlagged)
{
    auto rows = squash_report(koch(3), {0.5, 0.1});
    ASSERT_EQ(rows.size(), 2u);
    for (const auto& r : rows) {
        EXPECT_EQ(r.flag, "projection-null not certified");
        EXPECT_FALSE(r.certified);
        EXPECT_GT(r.cover_total_x, 0.5);
    }
}

TEST(SquashReport, RejectsIncreasingList)
{
    EXPECT_THROW(squash_report(four_corner(2), {0.1, 0.5}), InputError);
}

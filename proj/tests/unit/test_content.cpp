#include "lipsquash/content.hpp"
#include "lipsquash/planar.hpp"

#include "support/oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace lipsquash;

namespace {

std::vector<Vec> segment_sample(int n)
{
    std::vector<Vec> pts;
    for (int i = 0; i < n; ++i) pts.push_back(vec2(static_cast<double>(i) / (n - 1), 0.0));
    return pts;
}

std::vector<Box> four_corner_cells(int n)
{
    auto fix = four_corner(n);
    return cell_leaves(fix.points, fix.cell_side);
}

}  // namespace

TEST(Content, EmptySetIsZero)
{
    auto est = hausdorff_content(std::vector<Vec>{}, 1.0);
    EXPECT_EQ(est.upper, 0.0);
    EXPECT_TRUE(est.witness.pieces.empty());
}

TEST(Content, SinglePointIsZero)
{
    for (double s : {0.25, 1.0, 2.0}) EXPECT_EQ(hausdorff_content({vec2(0.3, 0.4)}, s).upper, 0.0);
}

TEST(Content, NegativeExponentRejected)
{
    EXPECT_THROW(hausdorff_content({vec2(0, 0)}, -0.5), InputError);
}

TEST(Content, SegmentSampleIsOneAtExponentOne)
{
    auto leaves = chain_leaves(segment_sample(1001));
    auto est = hausdorff_content_boxes(leaves, 1.0);
    EXPECT_LE(est.upper, 1.0 + 1e-9);
    EXPECT_GE(est.upper, 1.0 - 1e-9);
    EXPECT_TRUE(verify_witness(est.witness, leaves));
    EXPECT_EQ(hausdorff_content(segment_sample(1001), 1.0).upper, 0.0);
}

TEST(Content, FourCornerGenerationFiveWithinDiagonal)
{
    auto leaves = four_corner_cells(5);
    auto est = hausdorff_content_boxes(leaves, 1.0);
    EXPECT_LE(est.upper, std::sqrt(2.0) + 1e-12);
    EXPECT_TRUE(verify_witness(est.witness, leaves));
}

TEST(Content, FourCornerNonincreasingAcrossGenerations)
{
    double prev = INFINITY;
    for (int n = 2; n <= 6; ++n) {
        double u = hausdorff_content_boxes(four_corner_cells(n), 1.0).upper;
        EXPECT_LE(u, prev + 1e-12) << "generation " << n;
        EXPECT_LE(u, std::sqrt(2.0) + 1e-12);
        prev = u;
    }
}

TEST(Content, DeltaBoundsPieceDiameters)
{
    auto pts = segment_sample(101);
    auto est = hausdorff_content(pts, 1.0, 0.1);
    for (const auto& p : est.witness.pieces) EXPECT_LE(p.diameter(), 0.1 + 1e-12);
    EXPECT_TRUE(verify_witness(est.witness, point_leaves(pts), 0.1));
    EXPECT_NEAR(est.upper, est.witness.value, 0.0);
}

TEST(Content, NeverBelowExactContentOfTinySets)
{
    using Case = std::pair<std::vector<Vec>, double>;
    auto failure = oracle::for_all<Case>(
        5, 150,
        [](oracle::Rng& rng) {
            int n = rng.integer(1, 7);
            std::vector<Vec> pts;
            for (int i = 0; i < n; ++i) pts.push_back(rng.point(2));
            return Case{pts, rng.uniform(0.2, 2.0)};
        },
        [](const Case& c, std::string& why) {
            auto est = hausdorff_content(c.first, c.second);
            double exact = oracle::brute_content(c.first, c.second);
            why = "upper " + std::to_string(est.upper) + " exact " + std::to_string(exact);
            return est.upper >= exact - 1e-12 && verify_witness(est.witness, point_leaves(c.first));
        });
    EXPECT_TRUE(failure.empty()) << failure;
}

TEST(Content, WitnessAlwaysReverifies)
{
    using Case = std::pair<std::vector<Vec>, double>;
    auto failure = oracle::for_all<Case>(
        9, 60,
        [](oracle::Rng& rng) {
            int n = rng.integer(1, 300);
            std::vector<Vec> pts;
            for (int i = 0; i < n; ++i) pts.push_back(rng.point(2, -3.0, 3.0));
            return Case{pts, rng.uniform(0.0, 2.0)};
        },
        [](const Case& c, std::string& why) {
            auto est = hausdorff_content(c.first, c.second);
            why = "witness rejected";
            return est.upper == est.witness.value && verify_witness(est.witness, point_leaves(c.first));
        });
    EXPECT_TRUE(failure.empty()) << failure;
}

TEST(Content, DeterministicForFixedInput)
{
    oracle::Rng rng(3);
    std::vector<Vec> pts;
    for (int i = 0; i < 500; ++i) pts.push_back(rng.point(2));
    EXPECT_EQ(hausdorff_content(pts, 0.7).upper, hausdorff_content(pts, 0.7).upper);
}

TEST(Content, OneLipschitzImageOfWitnessNeverGrows)
{
    using Case = std::pair<std::vector<Vec>, double>;
    auto failure = oracle::for_all<Case>(
        13, 60,
        [](oracle::Rng& rng) {
            int n = rng.integer(2, 200);
            std::vector<Vec> pts;
            for (int i = 0; i < n; ++i) pts.push_back(rng.point(2));
            return Case{pts, rng.uniform(0.3, 1.5)};
        },
        [](const Case& c, std::string& why) {
            // A 1-Lipschitz fold followed by a rotation and shrink.
            VecMap f = [](const Vec& x) {
                double a = 0.7;
                Vec y = vec2(std::abs(x[0] - 0.5), x[1]);
                return Vec(0.8 * vec2(std::cos(a) * y[0] - std::sin(a) * y[1], std::sin(a) * y[0] + std::cos(a) * y[1]));
            };
            auto leaves = point_leaves(c.first);
            auto est = hausdorff_content_boxes(leaves, c.second);
            auto mapped = map_witness(est.witness, leaves, f);
            std::vector<Vec> img;
            for (const auto& p : c.first) img.push_back(f(p));
            why = "mapped " + std::to_string(mapped.value) + " vs " + std::to_string(est.upper);
            return mapped.value <= est.upper + 1e-9 && verify_witness(mapped, point_leaves(img));
        });
    EXPECT_TRUE(failure.empty()) << failure;
}

TEST(Profile, FiniteSetProxyAtMostQuarter)
{
    oracle::Rng rng(1);
    std::vector<Vec> pts;
    for (int i = 0; i < 10; ++i) pts.push_back(rng.point(2));
    auto prof = dimension_profile(pts, {0.25, 0.5, 1.0});
    ASSERT_TRUE(prof.proxy.has_value());
    EXPECT_LE(*prof.proxy, 0.25);
}

TEST(Profile, SegmentBoundsNonincreasingInExponent)
{
    auto prof = dimension_profile(chain_leaves(segment_sample(201)), {0.5, 1.0, 1.5});
    ASSERT_EQ(prof.rows.size(), 3u);
    EXPECT_LE(prof.rows[2].normalized, prof.rows[1].normalized + 1e-12);
    EXPECT_LE(prof.rows[1].normalized, prof.rows[0].normalized + 1e-12);
}

TEST(Profile, FourCornerProxyNearOne)
{
    std::vector<double> grid;
    for (double s = 0.5; s <= 1.5 + 1e-9; s += 0.05) grid.push_back(s);
    auto prof = dimension_profile(four_corner_cells(6), grid);
    ASSERT_TRUE(prof.proxy.has_value());
    EXPECT_NEAR(*prof.proxy, 1.0, 0.15);
    EXPECT_LE(prof.bracket_lo, *prof.proxy);
}

TEST(Profile, RejectsUnsortedGrid)
{
    EXPECT_THROW(dimension_profile(segment_sample(5), {1.0, 0.5}), InputError);
}

TEST(InflateWitness, GrowsBoxesAndHulls)
{
    CoverWitness w;
    w.s = 1.0;
    w.pieces.push_back({CoverPiece::Kind::Box, Box{vec2(0, 0), vec2(1, 1)}, {}});
    w.pieces.push_back({CoverPiece::Kind::Hull, {}, {vec2(3, 0), vec2(3, 2)}});
    auto g = inflate_witness(w, 0.5);
    ASSERT_EQ(g.pieces.size(), 2u);
    EXPECT_NEAR(g.value, 2.0 * std::sqrt(2.0) + std::sqrt(1.0 + 9.0), 1e-12);
    EXPECT_TRUE(verify_witness(g, point_leaves({vec2(-0.5, 1.5), vec2(3.5, -0.5)})));
    EXPECT_THROW(inflate_witness(w, -1.0), InputError);
}

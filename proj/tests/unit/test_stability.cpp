#include "lipsquash/planar.hpp"
#include "lipsquash/stability.hpp"

#include "support/oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace lipsquash;

TEST(SlopePartition, StraightSegmentIsOnePiece)
{
    auto g = SampledCurve::segment(vec2(0, 0), vec2(1, 0), 1001);
    auto p = slope_partition(g, 0.99, 0.1);
    ASSERT_EQ(p.pieces(), 1u);
    EXPECT_NEAR(p.slopes[0], 1.0, 1e-12);
}

TEST(SlopePartition, CircleCountsMatchChordArcOracle)
{
    const double s = 0.99;
    const double piece = oracle::max_arc_angle(s);
    for (double angle : {M_PI / 2, 2 * M_PI}) {
        auto g = SampledCurve::circle_arc(1.0, 0.0, angle, 20001);
        auto p = slope_partition(g, s, 0.5);
        EXPECT_EQ(p.pieces(), static_cast<std::size_t>(std::ceil(angle / piece))) << angle;
        for (std::size_t i = 0; i < p.pieces(); ++i) {
            EXPECT_GT(p.slopes[i], s);
            EXPECT_LT(p.deviations[i], 0.5);
            double a = p.breakpoints[i + 1] - p.breakpoints[i];
            EXPECT_NEAR(p.slopes[i], oracle::chord_arc(a), 1e-9);
        }
    }
    EXPECT_EQ(static_cast<int>(std::ceil(M_PI / 2 / piece)), 4);
    EXPECT_EQ(static_cast<int>(std::ceil(2 * M_PI / piece)), 13);
}

TEST(SlopePartition, CoarseSamplingIsResolutionError)
{
    auto g = SampledCurve::circle_arc(1.0, 0.0, 2 * M_PI, 9);
    EXPECT_THROW(slope_partition(g, 0.5, 0.1), ResolutionError);
}

TEST(RectEstimate, IdentityOnSegmentIsVacuousStrict)
{
    auto g = SampledCurve::segment(vec2(0, 0), vec2(1, 0), 1001);
    auto r = rect_estimate_check(g, [](const Vec& x) { return x; });
    EXPECT_NEAR(r.A, 0.0, 1e-12);
    EXPECT_EQ(r.outcome, EstimateOutcome::VacuousStrict);
}

TEST(RectEstimate, SmoothBumpHolds)
{
    auto g = SampledCurve::segment(vec2(0, 0), vec2(1, 0), 4001);
    // A bump of height 0.01, divided by the peak slope so that f stays 1-Lipschitz.
    const double peak = 1.0 + 0.01 * M_PI;
    VecMap f = [peak](const Vec& x) {
        return vec2((x[0] - 0.005 * (1 - std::cos(2 * M_PI * x[0]))) / peak, x[1]);
    };
    auto r = rect_estimate_check(g, f);
    double dev = 0.0;
    for (int i = 0; i <= 4000; ++i) {
        double t = i / 4000.0;
        dev = std::max(dev, std::abs(f(vec2(t, 0))[0] - t));
    }
    EXPECT_NEAR(r.eps, dev, 1e-12);
    EXPECT_NEAR(r.A, 2.0 * r.eps, 1e-9);
    EXPECT_TRUE(r.holds());
}

TEST(RectEstimate, RandomPlateauMapsHold)
{
    oracle::Rng rng(51);
    auto g = SampledCurve::segment(vec2(0, 0), vec2(1, 0), 4001);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<Interval> ivs;
        double budget = 0.1;
        while (budget > 0.0) {
            double a = rng.uniform(), len = std::min(budget, rng.uniform(0.0, 0.04));
            ivs.push_back({a, a + len});
            budget -= len;
        }
        GapIntegralMap G{IntervalCover(ivs)};
        const double shift = G.cover().total_length() / 2.0;
        VecMap f = [G, shift](const Vec& x) { return vec2(G(x[0]) + shift, x[1]); };
        auto r = rect_estimate_check(g, f);
        EXPECT_LE(r.eps, 0.05 + 1e-12);
        EXPECT_TRUE(r.holds() || r.outcome == EstimateOutcome::VacuousStrict) << to_string(r.outcome);
        EXPECT_GE(r.fraction, r.threshold);
    }
}

TEST(RectEstimate, LargeDeviationIsVacuous)
{
    auto g = SampledCurve::segment(vec2(0, 0), vec2(1, 0), 101);
    auto r = rect_estimate_check(g, [](const Vec& x) { return Vec(0.4 * x + vec2(0, 0.6)); });
    EXPECT_EQ(r.outcome, EstimateOutcome::Vacuous);
}

TEST(RectEstimate, NonLipschitzRejected)
{
    auto g = SampledCurve::segment(vec2(0, 0), vec2(1, 0), 101);
    EXPECT_THROW(rect_estimate_check(g, [](const Vec& x) { return Vec(1.5 * x); }), InputError);
}

TEST(Stability, IdentityHasNoDeviation)
{
    auto g = SampledCurve::circle_arc(1.0, 0.0, 1.0, 501);
    auto r = stability_experiment(g, [](const Vec& x) { return x; }, 0.1);
    EXPECT_EQ(r.deviation_fraction, 0.0);
    EXPECT_TRUE(r.bound_holds);
    EXPECT_TRUE(r.guaranteed);
}

TEST(Stability, SupNormIsNotGuaranteed)
{
    auto g = SampledCurve::segment(vec2(0, 0), vec2(1, 0), 101);
    auto r = stability_experiment(g, [](const Vec& x) { return x; }, 0.1, Norm::sup());
    EXPECT_FALSE(r.guaranteed);
}

TEST(Stability, RadialSweepReachesBound)
{
    auto g = SampledCurve::circle_arc(1.0, 0.0, M_PI / 2, 2001);
    for (double delta : {0.05, 0.1, 0.2}) {
        auto sw = stability_sweep(g, radial_family(Vec::Zero(2), 1.0), delta, 0.2, 8);
        ASSERT_TRUE(sw.first_holding.has_value()) << delta;
        EXPECT_TRUE(sw.tail_nonincreasing);
        for (const auto& row : sw.rows) {
            EXPECT_GE(row.deviation_fraction, 0.0);
            EXPECT_LE(row.deviation_fraction, 1.0);
            EXPECT_LE(row.lipschitz, 1.0 + 1e-9);
        }
    }
}

TEST(Stability, PolygonSweepReachesBound)
{
    auto g = SampledCurve::circle_arc(1.0, 0.0, M_PI / 2, 4001);
    auto sw = stability_sweep(g, polygon_family(Vec::Zero(2), 1.0), 0.1, 0.1, 8);
    ASSERT_TRUE(sw.first_holding.has_value());
    EXPECT_LE(sw.rows[*sw.first_holding].deviation_fraction, 0.1);
}

TEST(Stability, PolygonProjectionIsNearest)
{
    std::vector<Vec> sq{vec2(0, 0), vec2(1, 0), vec2(1, 1), vec2(0, 1)};
    EXPECT_TRUE(project_to_convex_polygon(sq, vec2(2, 0.5)).isApprox(vec2(1, 0.5)));
    EXPECT_TRUE(project_to_convex_polygon(sq, vec2(0.3, 0.4)).isApprox(vec2(0.3, 0.4)));
    EXPECT_TRUE(project_to_convex_polygon(sq, vec2(-1, -1)).isApprox(vec2(0, 0)));
}

TEST(Sawtooth, DeviationShrinksFractionStaysOne)
{
    for (int n : {4, 16, 64}) {
        auto row = sawtooth_demo(n);
        EXPECT_NEAR(row.sup_dev, 1.0 / (2.0 * n), 1e-9);
        EXPECT_EQ(row.deviation_fraction, 1.0);
        EXPECT_FALSE(row.bound_holds);
    }
}

TEST(Sawtooth, MapIsOneLipschitzInSupNorm)
{
    oracle::Rng rng(52);
    auto f = sawtooth_map(7);
    for (int i = 0; i < 5000; ++i) {
        Vec x = rng.point(2, -1, 2), y = rng.point(2, -1, 2);
        EXPECT_LE((f(x) - f(y)).lpNorm<Eigen::Infinity>(), (x - y).lpNorm<Eigen::Infinity>() + 1e-12);
    }
}

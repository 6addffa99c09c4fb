#pragma once

#include "lipsquash/content.hpp"
#include "lipsquash/measure.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace lipsquash {

// Planar similarity x -> ratio * Rot(angle) x + translation.
struct Similarity {
    double ratio = 1.0;
    double angle = 0.0;
    Vec translation = Vec::Zero(2);

    Vec apply(const Vec& x) const;
    Similarity then(const Similarity& inner) const;  // this o inner
};

struct FractalFixture {
    std::string name;
    std::vector<Similarity> maps;
    std::vector<Vec> base_polygon;  // generation-0 cell; its first vertex marks cells
    int generation = 0;
    std::vector<Vec> points;        // one representative per generation-n cell
    DiscreteMeasure natural_measure{2};
    double cell_side = 1.0;         // ratio^n for uniform-ratio systems
    bool projection_null_certified = false;

    std::vector<std::vector<Vec>> cells(int m) const;
};

FractalFixture four_corner(int n);
FractalFixture koch(int n);
FractalFixture custom_ifs(const std::string& name, const std::vector<Similarity>& maps,
                          const std::vector<Vec>& base_polygon, int n, bool projection_null = false);
FractalFixture single_point_fixture(const Vec& p);

struct Interval {
    double a = 0.0;
    double b = 0.0;
    double length() const { return b - a; }
    bool contains(double t) const { return a <= t && t <= b; }
};

// Sorts and merges overlapping or touching closed intervals.
std::vector<Interval> merge_intervals(std::vector<Interval> v);

class IntervalCover {
public:
    IntervalCover() = default;
    explicit IntervalCover(std::vector<Interval> intervals);

    const std::vector<Interval>& intervals() const { return intervals_; }
    std::size_t size() const { return intervals_.size(); }
    double total_length() const { return total_; }
    bool covers(double t) const;
    bool covers_all(const std::vector<double>& ts) const;
    // Smallest distance between consecutive intervals; infinity for fewer than two.
    double min_gap() const;

private:
    std::vector<Interval> intervals_;
    double total_ = 0.0;
};

struct ProjectedCover {
    IntervalCover cover;
    int generation = 0;
};

struct CoverOptions {
    int max_generation = 24;
};

ProjectedCover project_cover(const FractalFixture& fix, int axis, double eps_budget, const CoverOptions& opts = {});
// Merged axis projection of the generation-m cells.
IntervalCover projection_at(const FractalFixture& fix, int axis, int m);

// t -> integral from 0 to t of the indicator of the complement of the cover.
class GapIntegralMap {
public:
    GapIntegralMap() = default;
    explicit GapIntegralMap(IntervalCover cover);

    double operator()(double t) const;
    const IntervalCover& cover() const { return cover_; }

private:
    double covered_below(double t) const;

    IntervalCover cover_;
    std::vector<double> prefix_;     // covered length strictly left of interval k
    std::vector<double> plateau_;    // constant value on interval k
    double covered_at_zero_ = 0.0;
};

GapIntegralMap gap_integral_map(const IntervalCover& cover);

struct PlanarSquashMap {
    GapIntegralMap f1;
    GapIntegralMap f2;
    Vec operator()(const Vec& x) const;
};

struct PlanarSquashResult {
    PlanarSquashMap map;
    int m_x = 0;
    int m_y = 0;
    std::vector<Vec> image;
    std::size_t image_bound = 0;
    double sup_deviation = 0.0;
    double max_pair_ratio = 0.0;
    bool lipschitz_ok = false;
};

struct PlanarOptions {
    CoverOptions cover;
    double lipschitz_tolerance = 1e-12;
};

PlanarSquashResult build_planar_squash(const FractalFixture& fix, double eps, const PlanarOptions& opts = {});
// Same verification for a map built from explicit covers.
PlanarSquashResult planar_squash_from_covers(const FractalFixture& fix, const IntervalCover& cx,
                                             const IntervalCover& cy, double eps, const PlanarOptions& opts = {});

struct SquashReportRow {
    double eps = 0.0;
    int generation_x = 0;
    int generation_y = 0;
    double cover_total_x = 0.0;
    double cover_total_y = 0.0;
    std::size_t image_count = 0;
    double sup_dev = 0.0;
    double h1_content_upper = 0.0;
    bool certified = false;
    std::string flag;
};

std::vector<SquashReportRow> squash_report(const FractalFixture& fix, const std::vector<double>& eps_list,
                                           const PlanarOptions& opts = {});

std::vector<Vec> distinct_points(const std::vector<Vec>& pts);

}  // namespace lipsquash

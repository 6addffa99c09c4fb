#pragma once

#include "lipsquash/common.hpp"

#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

namespace lipsquash {

struct Box {
    Vec lo;
    Vec hi;

    static Box point(const Vec& p) { return {p, p}; }
    static Box cube(const Vec& corner, double side);
    int dim() const { return static_cast<int>(lo.size()); }
    double diameter() const { return (hi - lo).norm(); }
    Vec center() const { return (lo + hi) * 0.5; }
    bool contains(const Vec& p, double tol = 0.0) const;
    bool contains(const Box& b, double tol = 0.0) const;
    Box hull(const Box& b) const;
};

// A cover piece is either an axis-aligned box or the convex hull of listed points.
struct CoverPiece {
    enum class Kind { Box, Hull };
    Kind kind = Kind::Box;
    Box box;
    std::vector<Vec> hull;

    double diameter() const;
    bool covers(const Vec& p, double tol) const;
};

struct CoverWitness {
    std::vector<CoverPiece> pieces;
    double s = 0.0;
    double value = 0.0;

    double recompute() const;
};

struct ContentEstimate {
    double s = 0.0;
    double delta = std::numeric_limits<double>::infinity();
    double upper = 0.0;
    CoverWitness witness;
};

struct ContentOptions {
    int levels = 20;
};

// Leaves stand in for the set being covered: plain points, grid cells anchored at
// the sample points, or the chain of boxes spanned by consecutive polyline samples.
std::vector<Box> point_leaves(const std::vector<Vec>& points);
std::vector<Box> cell_leaves(const std::vector<Vec>& corners, double side);
std::vector<Box> chain_leaves(const std::vector<Vec>& polyline);

ContentEstimate hausdorff_content(const std::vector<Vec>& points, double s,
                                  double delta = std::numeric_limits<double>::infinity(),
                                  const ContentOptions& opts = {});
ContentEstimate hausdorff_content_boxes(const std::vector<Box>& leaves, double s,
                                        double delta = std::numeric_limits<double>::infinity(),
                                        const ContentOptions& opts = {});

// Coverage of every leaf, piece diameters within delta, and value recomputed to 1e-12.
bool verify_witness(const CoverWitness& w, const std::vector<Box>& leaves,
                    double delta = std::numeric_limits<double>::infinity());

// Carries each piece through f, replacing it by the hull of the images of the leaves
// it covered. For 1-Lipschitz f the value cannot grow.
CoverWitness map_witness(const CoverWitness& w, const std::vector<Box>& leaves, const VecMap& f);

// Every piece replaced by its bounding box grown by tau on each side. The result covers any
// set whose points lie within tau (sup norm) of points the original pieces covered.
CoverWitness inflate_witness(const CoverWitness& w, double tau);

struct ProfileRow {
    double s = 0.0;
    double upper = 0.0;
    double normalized = 0.0;  // upper / diam^s
    std::size_t pieces = 0;
};

struct DimensionProfile {
    std::vector<ProfileRow> rows;
    double delta = std::numeric_limits<double>::infinity();
    double diameter = 0.0;
    std::optional<double> proxy;
    double bracket_lo = 0.0;
    double bracket_hi = std::numeric_limits<double>::infinity();
};

struct ProfileOptions {
    double threshold = 1e-6;
    double knee_tolerance = 1e-9;
    double delta = std::numeric_limits<double>::infinity();
    ContentOptions content;
};

DimensionProfile dimension_profile(const std::vector<Box>& leaves, const std::vector<double>& s_grid,
                                   const ProfileOptions& opts = {});
DimensionProfile dimension_profile(const std::vector<Vec>& points, const std::vector<double>& s_grid,
                                   const ProfileOptions& opts = {});

}  // namespace lipsquash

#pragma once

#include "lipsquash/content.hpp"
#include "lipsquash/measure.hpp"
#include "lipsquash/planar.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace lipsquash {

// One closed parameter interval with a polyline through (knots[i], values[i]).
struct FragmentPiece {
    std::vector<double> knots;
    std::vector<Vec> values;

    Interval domain() const { return {knots.front(), knots.back()}; }
};

struct Segment {
    double t0, t1;
    Vec p0, p1;

    double duration() const { return t1 - t0; }
    Vec velocity() const { return duration() > 0.0 ? Vec((p1 - p0) / duration()) : Vec(Vec::Zero(p0.size())); }
    double length() const { return (p1 - p0).norm(); }
    Vec at(double t) const;
};

// Piecewise-linear Lipschitz curve fragment on a finite union of closed intervals in [0,1].
class CurveFragment {
public:
    CurveFragment() = default;
    CurveFragment(std::vector<FragmentPiece> pieces, double lipschitz_bound);

    // Uniform knots on [a,b] through the given values.
    static CurveFragment uniform(const std::vector<Interval>& domain, const std::vector<std::vector<Vec>>& values,
                                 double lipschitz_bound = 0.0);
    static CurveFragment segment(const Vec& p, const Vec& q, Interval domain = {0.0, 1.0});

    int dim() const { return dim_; }
    double lipschitz_bound() const { return L_; }
    const std::vector<FragmentPiece>& pieces() const { return pieces_; }
    std::vector<Interval> domain() const;
    double domain_measure() const;
    std::vector<Segment> segments() const;

    bool in_domain(double t) const;
    Vec eval(double t) const;
    double arclength() const;
    double measured_lipschitz() const;
    // Distinct vertex values and no stalled segments.
    bool injective_on_samples() const;
    bool empty() const { return pieces_.empty(); }

private:
    std::vector<FragmentPiece> pieces_;
    double L_ = 0.0;
    int dim_ = 0;
};

struct FragmentFamily {
    std::vector<CurveFragment> fragments;
    std::vector<double> weights;
    bool alberti_candidate = false;

    std::size_t size() const { return fragments.size(); }
    void add(CurveFragment f, double w);
    void validate() const;
};

FragmentFamily concatenate(const FragmentFamily& a, const FragmentFamily& b);

struct FragmentDistanceOptions {
    double resolution = 1e-3;
};

// Hausdorff distance of graphs {(gamma(t), t)} under max(|x-y|, |s-t|).
double fragment_distance(const CurveFragment& a, const CurveFragment& b, const FragmentDistanceOptions& opts = {});

// Dense samples of the graph in X x [0,1], last coordinate time.
std::vector<Vec> lift_graph(const CurveFragment& f, double resolution);
// Hausdorff distance of finite sets in X x [0,1] under the max product metric.
double lifted_hausdorff(const std::vector<Vec>& a, const std::vector<Vec>& b);

// A region in X given as a union of closed boxes; empty optional means all of X.
using Region = std::optional<std::vector<Box>>;

double barycenter_mass(const FragmentFamily& eta, const Region& region = std::nullopt);
DiscreteMeasure barycenter_measure(const FragmentFamily& eta, double granularity);

struct AlbertiVerdict {
    bool dominated = false;
    std::optional<std::size_t> witness;  // uncovered atom index
    double witness_distance = 0.0;
};

AlbertiVerdict alberti_check(const DiscreteMeasure& mu, const FragmentFamily& eta, double granularity);

// Parameter set where a segment's graph point lies in the box (last coordinate time).
std::optional<Interval> clip_segment(const Segment& s, const Box& box);

struct RestrictionOp {
    std::vector<std::vector<Interval>> keep;  // per source fragment
    std::vector<double> relative_density;
    std::vector<double> source_arclength;
    std::vector<std::size_t> survivors;       // source index of each restricted fragment

    std::size_t size() const { return keep.size(); }
};

CurveFragment restrict_fragment(const CurveFragment& f, const std::vector<Interval>& keep);

struct Restriction {
    RestrictionOp op;
    FragmentFamily family;
};

Restriction slice_restriction(const FragmentFamily& eta, const std::vector<Box>& K);
Restriction restriction_from_keep(const FragmentFamily& eta, std::vector<std::vector<Interval>> keep);

struct MassIdentity {
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = false;
};

MassIdentity restriction_mass_identity(const FragmentFamily& eta, const RestrictionOp& op);

double point_segment_distance(const Vec& p, const Vec& a, const Vec& b);

}  // namespace lipsquash

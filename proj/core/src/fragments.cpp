#include "lipsquash/fragments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace lipsquash {

Vec Segment::at(double t) const
{
    if (duration() <= 0.0) return p0;
    double u = (t - t0) / duration();
    return p0 + u * (p1 - p0);
}

CurveFragment::CurveFragment(std::vector<FragmentPiece> pieces, double lipschitz_bound)
    : pieces_(std::move(pieces)), L_(lipschitz_bound)
{
    const double tol = 1e-12;
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
        const auto& p = pieces_[i];
        if (p.knots.empty() || p.knots.size() != p.values.size())
            throw InputError("fragment piece needs matching knots and values");
        for (std::size_t j = 1; j < p.knots.size(); ++j)
            if (!(p.knots[j] > p.knots[j - 1])) throw InputError("fragment knots must increase strictly");
        if (p.knots.front() < -tol || p.knots.back() > 1.0 + tol)
            throw InputError("fragment domain must lie in [0,1]");
        if (i > 0 && !(p.knots.front() > pieces_[i - 1].knots.back()))
            throw InputError("fragment domain intervals must be sorted and disjoint");
        for (const auto& v : p.values) {
            if (dim_ == 0) dim_ = static_cast<int>(v.size());
            if (v.size() != dim_ || !v.allFinite()) throw InputError("fragment values of inconsistent dimension");
        }
    }
    double measured = measured_lipschitz();
    if (L_ <= 0.0)
        L_ = measured;
    else if (measured > L_ * (1.0 + 1e-9) + 1e-12)
        throw InputError("fragment violates its declared Lipschitz bound (" + std::to_string(measured) + " > " +
                         std::to_string(L_) + ")");
}

CurveFragment CurveFragment::uniform(const std::vector<Interval>& domain, const std::vector<std::vector<Vec>>& values,
                                     double lipschitz_bound)
{
    if (domain.size() != values.size()) throw InputError("one value list per domain interval is required");
    std::vector<FragmentPiece> pieces;
    for (std::size_t i = 0; i < domain.size(); ++i) {
        const auto& vals = values[i];
        const auto [a, b] = domain[i];
        if (vals.empty()) throw InputError("empty value list");
        if (vals.size() == 1 && a != b) throw InputError("a single value needs a degenerate interval");
        if (vals.size() > 1 && !(b > a)) throw InputError("interval with a >= b");
        FragmentPiece p;
        const std::size_t n = vals.size();
        for (std::size_t j = 0; j < n; ++j)
            p.knots.push_back(n == 1 ? a : (j + 1 == n ? b : a + (b - a) * static_cast<double>(j) / static_cast<double>(n - 1)));
        p.values = vals;
        pieces.push_back(std::move(p));
    }
    return CurveFragment(std::move(pieces), lipschitz_bound);
}

CurveFragment CurveFragment::segment(const Vec& p, const Vec& q, Interval domain)
{
    return uniform({domain}, {{p, q}});
}

std::vector<Interval> CurveFragment::domain() const
{
    std::vector<Interval> out;
    for (const auto& p : pieces_) out.push_back(p.domain());
    return out;
}

double CurveFragment::domain_measure() const
{
    double m = 0.0;
    for (const auto& p : pieces_) m += p.domain().length();
    return m;
}

std::vector<Segment> CurveFragment::segments() const
{
    std::vector<Segment> out;
    for (const auto& p : pieces_)
        for (std::size_t j = 0; j + 1 < p.knots.size(); ++j)
            out.push_back({p.knots[j], p.knots[j + 1], p.values[j], p.values[j + 1]});
    return out;
}

bool CurveFragment::in_domain(double t) const
{
    return std::any_of(pieces_.begin(), pieces_.end(), [t](const FragmentPiece& p) { return p.domain().contains(t); });
}

Vec CurveFragment::eval(double t) const
{
    for (const auto& p : pieces_) {
        if (!p.domain().contains(t)) continue;
        auto it = std::upper_bound(p.knots.begin(), p.knots.end(), t);
        if (it == p.knots.end()) return p.values.back();
        auto j = static_cast<std::size_t>(it - p.knots.begin());
        if (j == 0) return p.values.front();
        if (p.knots[j - 1] == t) return p.values[j - 1];
        Segment s{p.knots[j - 1], p.knots[j], p.values[j - 1], p.values[j]};
        return s.at(t);
    }
    throw DomainError("parameter " + std::to_string(t) + " outside the fragment domain");
}

double CurveFragment::arclength() const
{
    double len = 0.0;
    for (const auto& p : pieces_)
        for (std::size_t j = 0; j + 1 < p.values.size(); ++j) len += (p.values[j + 1] - p.values[j]).norm();
    return len;
}

double CurveFragment::measured_lipschitz() const
{
    double L = 0.0;
    for (const auto& s : segments()) L = std::max(L, s.length() / s.duration());
    for (std::size_t a = 0; a < pieces_.size(); ++a)
        for (std::size_t b = a + 1; b < pieces_.size(); ++b)
            for (std::size_t i = 0; i < pieces_[a].knots.size(); ++i)
                for (std::size_t j = 0; j < pieces_[b].knots.size(); ++j) {
                    double dt = pieces_[b].knots[j] - pieces_[a].knots[i];
                    L = std::max(L, (pieces_[b].values[j] - pieces_[a].values[i]).norm() / dt);
                }
    return L;
}

bool CurveFragment::injective_on_samples() const
{
    std::map<std::vector<double>, int> seen;
    for (const auto& p : pieces_) {
        for (std::size_t j = 0; j < p.values.size(); ++j) {
            if (j + 1 < p.values.size() && p.values[j + 1] == p.values[j]) return false;
            Vec c = canonical_point(p.values[j]);
            if (!seen.emplace(std::vector<double>(c.data(), c.data() + c.size()), 0).second) return false;
        }
    }
    return true;
}

void FragmentFamily::add(CurveFragment f, double w)
{
    if (!(w > 0.0) || !std::isfinite(w)) throw InputError("fragment weights must be positive");
    fragments.push_back(std::move(f));
    weights.push_back(w);
}

void FragmentFamily::validate() const
{
    if (fragments.size() != weights.size()) throw InputError("one weight per fragment is required");
    int dim = 0;
    for (std::size_t i = 0; i < fragments.size(); ++i) {
        if (!(weights[i] > 0.0) || !std::isfinite(weights[i])) throw InputError("fragment weights must be positive");
        if (fragments[i].empty()) continue;
        if (dim == 0) dim = fragments[i].dim();
        if (fragments[i].dim() != dim) throw InputError("fragments of different dimensions");
    }
}

FragmentFamily concatenate(const FragmentFamily& a, const FragmentFamily& b)
{
    FragmentFamily out = a;
    for (std::size_t i = 0; i < b.size(); ++i) out.add(b.fragments[i], b.weights[i]);
    out.alberti_candidate = a.alberti_candidate && b.alberti_candidate;
    return out;
}

namespace {

double max_metric(const Vec& x, double s, const Vec& y, double t)
{
    return std::max((x - y).norm(), std::abs(s - t));
}

// min over tau of max(|x - sigma(tau)|, |s - tau|); the objective is convex in tau.
double graph_point_to_segment(const Vec& x, double s, const Segment& seg)
{
    double lo = seg.t0, hi = seg.t1;
    auto f = [&](double tau) { return max_metric(x, s, seg.at(tau), tau); };
    if (hi <= lo) return f(lo);
    for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++it) {
        double m1 = lo + (hi - lo) / 3.0;
        double m2 = hi - (hi - lo) / 3.0;
        if (f(m1) <= f(m2))
            hi = m2;
        else
            lo = m1;
    }
    return std::min({f(0.5 * (lo + hi)), f(seg.t0), f(seg.t1)});
}

struct GraphParts {
    std::vector<Segment> segments;
};

GraphParts graph_parts(const CurveFragment& f)
{
    GraphParts g;
    for (const auto& p : f.pieces()) {
        if (p.knots.size() == 1) {
            g.segments.push_back({p.knots[0], p.knots[0], p.values[0], p.values[0]});
            continue;
        }
        for (std::size_t j = 0; j + 1 < p.knots.size(); ++j)
            g.segments.push_back({p.knots[j], p.knots[j + 1], p.values[j], p.values[j + 1]});
    }
    return g;
}

double lower_bound(const Vec& x, double s, const Segment& seg)
{
    double dt = s < seg.t0 ? seg.t0 - s : (s > seg.t1 ? s - seg.t1 : 0.0);
    Vec lo = seg.p0.cwiseMin(seg.p1);
    Vec hi = seg.p0.cwiseMax(seg.p1);
    Vec gap = (lo - x).cwiseMax(x - hi).cwiseMax(0.0);
    return std::max(dt, gap.norm());
}

double distance_to_graph(const Vec& x, double s, const GraphParts& g)
{
    double best = std::numeric_limits<double>::infinity();
    for (const auto& seg : g.segments) {
        if (lower_bound(x, s, seg) >= best) continue;
        best = std::min(best, graph_point_to_segment(x, s, seg));
    }
    return best;
}

double directed(const CurveFragment& a, const GraphParts& gb, double resolution)
{
    double sup = 0.0;
    for (const auto& seg : graph_parts(a).segments) {
        auto n = static_cast<std::size_t>(std::ceil(seg.duration() / resolution));
        n = std::max<std::size_t>(n, 1);
        for (std::size_t i = 0; i <= n; ++i) {
            double t = i == n ? seg.t1 : seg.t0 + seg.duration() * static_cast<double>(i) / static_cast<double>(n);
            sup = std::max(sup, distance_to_graph(seg.at(t), t, gb));
        }
    }
    return sup;
}

}  // namespace

double fragment_distance(const CurveFragment& a, const CurveFragment& b, const FragmentDistanceOptions& opts)
{
    if (!(opts.resolution > 0.0)) throw InputError("resolution must be positive");
    if (a.empty() && b.empty()) return 0.0;
    if (a.empty() || b.empty()) return std::numeric_limits<double>::infinity();
    if (a.dim() != b.dim()) throw InputError("fragments live in different spaces");
    auto ga = graph_parts(a);
    auto gb = graph_parts(b);
    return std::max(directed(a, gb, opts.resolution), directed(b, ga, opts.resolution));
}

std::vector<Vec> lift_graph(const CurveFragment& f, double resolution)
{
    std::vector<Vec> out;
    for (const auto& seg : graph_parts(f).segments) {
        auto n = std::max<std::size_t>(static_cast<std::size_t>(std::ceil(seg.duration() / resolution)), 1);
        for (std::size_t i = 0; i <= n; ++i) {
            double t = i == n ? seg.t1 : seg.t0 + seg.duration() * static_cast<double>(i) / static_cast<double>(n);
            Vec p(f.dim() + 1);
            p << seg.at(t), t;
            out.push_back(std::move(p));
        }
    }
    return out;
}

double lifted_hausdorff(const std::vector<Vec>& a, const std::vector<Vec>& b)
{
    auto d = [](const Vec& x, const Vec& y) {
        const Eigen::Index k = x.size() - 1;
        return std::max((x.head(k) - y.head(k)).norm(), std::abs(x[k] - y[k]));
    };
    auto dir = [&](const std::vector<Vec>& p, const std::vector<Vec>& q) {
        double sup = 0.0;
        for (const auto& x : p) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& y : q) best = std::min(best, d(x, y));
            sup = std::max(sup, best);
        }
        return sup;
    };
    return std::max(dir(a, b), dir(b, a));
}

double point_segment_distance(const Vec& p, const Vec& a, const Vec& b)
{
    Vec ab = b - a;
    double len2 = ab.squaredNorm();
    if (len2 == 0.0) return (p - a).norm();
    double u = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
    return (p - (a + u * ab)).norm();
}

namespace {

// Fractions u in [0,1] with p0 + u (p1 - p0) inside [lo, hi] over the first k coordinates.
std::optional<Interval> clip_fraction(const Vec& p0, const Vec& p1, const Vec& lo, const Vec& hi, Eigen::Index k)
{
    double u0 = 0.0, u1 = 1.0;
    for (Eigen::Index i = 0; i < k; ++i) {
        double d = p1[i] - p0[i];
        if (d == 0.0) {
            if (p0[i] < lo[i] || p0[i] > hi[i]) return std::nullopt;
            continue;
        }
        double a = (lo[i] - p0[i]) / d;
        double b = (hi[i] - p0[i]) / d;
        if (a > b) std::swap(a, b);
        u0 = std::max(u0, a);
        u1 = std::min(u1, b);
        if (u0 > u1) return std::nullopt;
    }
    return Interval{u0, u1};
}

double param_at(const Segment& s, double u)
{
    if (u <= 0.0) return s.t0;
    if (u >= 1.0) return s.t1;
    return s.t0 + u * s.duration();
}

}  // namespace

std::optional<Interval> clip_segment(const Segment& s, const Box& box)
{
    const Eigen::Index k = s.p0.size();
    if (box.lo.size() != k + 1) throw InputError("slice boxes live in X x [0,1]");
    double t0 = std::max(s.t0, box.lo[k]);
    double t1 = std::min(s.t1, box.hi[k]);
    if (t0 > t1) return std::nullopt;
    auto fr = clip_fraction(s.p0, s.p1, box.lo, box.hi, k);
    if (!fr) return std::nullopt;
    double a = std::max(t0, param_at(s, fr->a));
    double b = std::min(t1, param_at(s, fr->b));
    if (s.duration() == 0.0) a = b = s.t0;
    if (a > b) return std::nullopt;
    return Interval{a, b};
}

double barycenter_mass(const FragmentFamily& eta, const Region& region)
{
    eta.validate();
    double mass = 0.0;
    for (std::size_t i = 0; i < eta.size(); ++i) {
        double m = 0.0;
        for (const auto& seg : eta.fragments[i].segments()) {
            if (!region) {
                m += seg.length();
                continue;
            }
            std::vector<Interval> parts;
            for (const auto& box : *region) {
                if (box.lo.size() != seg.p0.size()) throw InputError("region boxes live in X");
                if (auto fr = clip_fraction(seg.p0, seg.p1, box.lo, box.hi, seg.p0.size())) parts.push_back(*fr);
            }
            for (const auto& iv : merge_intervals(parts)) m += iv.length() * seg.length();
        }
        mass += eta.weights[i] * m;
    }
    return mass;
}

DiscreteMeasure barycenter_measure(const FragmentFamily& eta, double granularity)
{
    eta.validate();
    if (!(granularity > 0.0)) throw InputError("granularity must be positive");
    int dim = 1;
    for (const auto& f : eta.fragments)
        if (!f.empty()) dim = f.dim();
    DiscreteMeasure out(dim);
    for (std::size_t i = 0; i < eta.size(); ++i) {
        for (const auto& seg : eta.fragments[i].segments()) {
            double len = seg.length();
            if (len == 0.0) continue;
            auto n = std::max<std::size_t>(static_cast<std::size_t>(std::ceil(len / granularity)), 1);
            for (std::size_t j = 0; j < n; ++j) {
                double u = (static_cast<double>(j) + 0.5) / static_cast<double>(n);
                out.add(seg.p0 + u * (seg.p1 - seg.p0), eta.weights[i] * len / static_cast<double>(n));
            }
        }
    }
    return out;
}

AlbertiVerdict alberti_check(const DiscreteMeasure& mu, const FragmentFamily& eta, double granularity)
{
    eta.validate();
    if (!(granularity > 0.0)) throw InputError("granularity must be positive");
    for (std::size_t i = 0; i < eta.size(); ++i)
        if (!eta.fragments[i].injective_on_samples())
            throw DomainError("fragment " + std::to_string(i) + " is not injective; Alberti families need injective fragments");

    std::vector<Segment> carriers;
    for (const auto& f : eta.fragments) {
        if (f.dim() != mu.dim()) throw InputError("measure and fragments live in different spaces");
        for (const auto& s : f.segments())
            if (s.length() > 0.0) carriers.push_back(s);
    }

    AlbertiVerdict v;
    v.dominated = true;
    for (std::size_t a = 0; a < mu.size(); ++a) {
        if (mu.weight(a) == 0.0) continue;
        double best = std::numeric_limits<double>::infinity();
        for (const auto& s : carriers) {
            best = std::min(best, point_segment_distance(mu.point(a), s.p0, s.p1));
            if (best <= granularity) break;
        }
        if (best > granularity) {
            v.dominated = false;
            v.witness = a;
            v.witness_distance = best;
            return v;
        }
    }
    return v;
}

CurveFragment restrict_fragment(const CurveFragment& f, const std::vector<Interval>& keep)
{
    std::vector<FragmentPiece> pieces;
    for (const auto& iv : keep) {
        if (!(iv.b > iv.a)) continue;
        const FragmentPiece* src = nullptr;
        for (const auto& p : f.pieces())
            if (p.domain().contains(iv.a) && p.domain().contains(iv.b)) src = &p;
        if (!src) throw DomainError("kept interval is not inside a single domain interval");
        FragmentPiece out;
        out.knots.push_back(iv.a);
        out.values.push_back(f.eval(iv.a));
        for (std::size_t j = 0; j < src->knots.size(); ++j) {
            if (src->knots[j] > iv.a && src->knots[j] < iv.b) {
                out.knots.push_back(src->knots[j]);
                out.values.push_back(src->values[j]);
            }
        }
        out.knots.push_back(iv.b);
        out.values.push_back(f.eval(iv.b));
        pieces.push_back(std::move(out));
    }
    // The restricted fragment reports its own measured constant, which never exceeds the source's.
    return CurveFragment(std::move(pieces), 0.0);
}

Restriction restriction_from_keep(const FragmentFamily& eta, std::vector<std::vector<Interval>> keep)
{
    eta.validate();
    if (keep.size() != eta.size()) throw DomainError("one kept set per fragment is required");
    Restriction out;
    out.family.alberti_candidate = eta.alberti_candidate;
    for (std::size_t i = 0; i < eta.size(); ++i) {
        std::vector<Interval> k;
        for (const auto& iv : merge_intervals(keep[i]))
            if (iv.b > iv.a) k.push_back(iv);
        const CurveFragment& f = eta.fragments[i];
        CurveFragment r = restrict_fragment(f, k);
        double len = f.arclength();
        out.op.keep.push_back(k);
        out.op.source_arclength.push_back(len);
        out.op.relative_density.push_back(len > 0.0 ? r.arclength() / len : 1.0);
        if (!r.empty()) {
            out.op.survivors.push_back(i);
            out.family.add(std::move(r), eta.weights[i]);
        }
    }
    return out;
}

Restriction slice_restriction(const FragmentFamily& eta, const std::vector<Box>& K)
{
    eta.validate();
    std::vector<std::vector<Interval>> keep(eta.size());
    for (std::size_t i = 0; i < eta.size(); ++i) {
        for (const auto& p : eta.fragments[i].pieces()) {
            std::vector<Interval> parts;
            for (std::size_t j = 0; j + 1 < p.knots.size(); ++j) {
                Segment s{p.knots[j], p.knots[j + 1], p.values[j], p.values[j + 1]};
                for (const auto& box : K)
                    if (auto iv = clip_segment(s, box)) parts.push_back(*iv);
            }
            for (const auto& iv : merge_intervals(parts)) keep[i].push_back(iv);
        }
    }
    return restriction_from_keep(eta, std::move(keep));
}

MassIdentity restriction_mass_identity(const FragmentFamily& eta, const RestrictionOp& op)
{
    eta.validate();
    if (op.size() != eta.size() || op.relative_density.size() != eta.size() || op.source_arclength.size() != eta.size())
        throw DomainError("restriction operator does not match the family size");
    MassIdentity m;
    FragmentFamily restricted;
    for (std::size_t i = 0; i < eta.size(); ++i) {
        const CurveFragment& f = eta.fragments[i];
        double len = f.arclength();
        if (std::abs(len - op.source_arclength[i]) > 1e-12 * std::max(1.0, len))
            throw DomainError("restriction operator was built from a different fragment at index " + std::to_string(i));
        for (const auto& iv : op.keep[i])
            if (!f.in_domain(iv.a) || !f.in_domain(iv.b))
                throw DomainError("kept interval outside the fragment domain at index " + std::to_string(i));
        CurveFragment r = restrict_fragment(f, op.keep[i]);
        if (!r.empty()) restricted.add(std::move(r), eta.weights[i]);
        m.rhs += eta.weights[i] * (1.0 - op.relative_density[i]) * len;
    }
    m.lhs = barycenter_mass(eta) - barycenter_mass(restricted);
    m.holds = std::abs(m.lhs - m.rhs) <= 1e-9;
    if (!m.holds)
        throw ContractViolation("restriction mass identity fails: lhs " + std::to_string(m.lhs) + ", rhs " +
                                std::to_string(m.rhs));
    return m;
}

}  // namespace lipsquash

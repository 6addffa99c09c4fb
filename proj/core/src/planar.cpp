#include "lipsquash/planar.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>

namespace lipsquash {

Vec Similarity::apply(const Vec& x) const
{
    if (angle == 0.0) return ratio * x + translation;
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    return vec2(ratio * (c * x[0] - s * x[1]) + translation[0], ratio * (s * x[0] + c * x[1]) + translation[1]);
}

Similarity Similarity::then(const Similarity& inner) const
{
    Similarity out;
    out.ratio = ratio * inner.ratio;
    out.angle = angle + inner.angle;
    out.translation = apply(inner.translation);
    return out;
}

namespace {

constexpr std::size_t kMaxCells = std::size_t{1} << 22;

std::vector<Similarity> words(const std::vector<Similarity>& maps, int m)
{
    double count = std::pow(static_cast<double>(maps.size()), m);
    if (count > static_cast<double>(kMaxCells))
        throw ParameterError("generation " + std::to_string(m) + " has too many cells to enumerate");
    std::vector<Similarity> level{Similarity{}};
    for (int g = 0; g < m; ++g) {
        std::vector<Similarity> next;
        next.reserve(level.size() * maps.size());
        for (const auto& w : level)
            for (const auto& f : maps) next.push_back(w.then(f));
        level = std::move(next);
    }
    return level;
}

FractalFixture make_fixture(std::string name, std::vector<Similarity> maps, std::vector<Vec> base, int n,
                            bool null_certified)
{
    if (n < 0) throw InputError("generation must be nonnegative");
    if (maps.empty()) throw InputError("an IFS needs at least one map");
    if (base.empty()) throw InputError("base polygon is empty");
    for (const auto& f : maps)
        if (!(f.ratio > 0.0 && f.ratio < 1.0)) throw InputError("IFS maps must be contractions");

    FractalFixture fix;
    fix.name = std::move(name);
    fix.maps = std::move(maps);
    fix.base_polygon = std::move(base);
    fix.generation = n;
    fix.projection_null_certified = null_certified;
    fix.points = distinct_points([&] {
        std::vector<Vec> pts;
        for (const auto& w : words(fix.maps, n)) pts.push_back(w.apply(fix.base_polygon.front()));
        return pts;
    }());
    fix.natural_measure = DiscreteMeasure::uniform(2, fix.points);
    double r = fix.maps.front().ratio;
    fix.cell_side = std::pow(r, n);
    return fix;
}

}  // namespace

std::vector<std::vector<Vec>> FractalFixture::cells(int m) const
{
    std::vector<std::vector<Vec>> out;
    for (const auto& w : words(maps, m)) {
        std::vector<Vec> poly;
        for (const auto& v : base_polygon) poly.push_back(w.apply(v));
        out.push_back(std::move(poly));
    }
    return out;
}

FractalFixture four_corner(int n)
{
    std::vector<Similarity> maps;
    for (auto [x, y] : {std::pair{0.0, 0.0}, {0.75, 0.0}, {0.0, 0.75}, {0.75, 0.75}})
        maps.push_back({0.25, 0.0, vec2(x, y)});
    std::vector<Vec> square{vec2(0, 0), vec2(1, 0), vec2(1, 1), vec2(0, 1)};
    return make_fixture("four_corner", std::move(maps), std::move(square), n, true);
}

FractalFixture koch(int n)
{
    const double third = 1.0 / 3.0;
    const double pi3 = std::numbers::pi / 3.0;
    const double apex = std::sqrt(3.0) / 6.0;
    std::vector<Similarity> maps{
        {third, 0.0, vec2(0.0, 0.0)},
        {third, pi3, vec2(third, 0.0)},
        {third, -pi3, vec2(0.5, apex)},
        {third, 0.0, vec2(2.0 * third, 0.0)},
    };
    std::vector<Vec> triangle{vec2(0, 0), vec2(1, 0), vec2(0.5, apex)};
    return make_fixture("koch", std::move(maps), std::move(triangle), n, false);
}

FractalFixture custom_ifs(const std::string& name, const std::vector<Similarity>& maps,
                          const std::vector<Vec>& base_polygon, int n, bool projection_null)
{
    return make_fixture(name, maps, base_polygon, n, projection_null);
}

FractalFixture single_point_fixture(const Vec& p)
{
    FractalFixture fix;
    fix.name = "point";
    fix.maps = {{0.5, 0.0, p * 0.5}};
    fix.base_polygon = {p};
    fix.points = {p};
    fix.natural_measure = DiscreteMeasure::uniform(2, fix.points);
    fix.cell_side = 0.0;
    fix.projection_null_certified = true;
    return fix;
}

std::vector<Interval> merge_intervals(std::vector<Interval> v)
{
    for (const auto& iv : v)
        if (!(iv.a <= iv.b)) throw InputError("interval with a > b");
    std::sort(v.begin(), v.end(), [](const Interval& x, const Interval& y) { return x.a < y.a; });
    std::vector<Interval> out;
    for (const auto& iv : v) {
        if (!out.empty() && iv.a <= out.back().b)
            out.back().b = std::max(out.back().b, iv.b);
        else
            out.push_back(iv);
    }
    return out;
}

IntervalCover::IntervalCover(std::vector<Interval> intervals) : intervals_(merge_intervals(std::move(intervals)))
{
    for (const auto& iv : intervals_) total_ += iv.length();
}

bool IntervalCover::covers(double t) const
{
    auto it = std::upper_bound(intervals_.begin(), intervals_.end(), t,
                               [](double x, const Interval& iv) { return x < iv.a; });
    if (it == intervals_.begin()) return false;
    return t <= std::prev(it)->b;
}

bool IntervalCover::covers_all(const std::vector<double>& ts) const
{
    return std::all_of(ts.begin(), ts.end(), [&](double t) { return covers(t); });
}

double IntervalCover::min_gap() const
{
    double g = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < intervals_.size(); ++i) g = std::min(g, intervals_[i].a - intervals_[i - 1].b);
    return g;
}

IntervalCover projection_at(const FractalFixture& fix, int axis, int m)
{
    if (axis != 0 && axis != 1) throw InputError("axis must be 0 (x) or 1 (y)");
    bool rotation_free = std::all_of(fix.maps.begin(), fix.maps.end(), [](const Similarity& f) { return f.angle == 0.0; });
    if (fix.base_polygon.size() == 1 && fix.points.size() == 1) {
        double t = fix.points.front()[axis];
        return IntervalCover({{t, t}});
    }
    if (rotation_free) {
        // Axis projections of a rotation-free system form a one-dimensional IFS.
        double lo = INFINITY, hi = -INFINITY;
        for (const auto& v : fix.base_polygon) {
            lo = std::min(lo, v[axis]);
            hi = std::max(hi, v[axis]);
        }
        std::vector<Interval> level{{lo, hi}};
        for (int g = 0; g < m; ++g) {
            std::vector<Interval> next;
            next.reserve(level.size() * fix.maps.size());
            for (const auto& f : fix.maps)
                for (const auto& iv : level)
                    next.push_back({f.ratio * iv.a + f.translation[axis], f.ratio * iv.b + f.translation[axis]});
            level = merge_intervals(std::move(next));
            if (level.size() > kMaxCells) throw ParameterError("projection at generation " + std::to_string(m) + " is too fine");
        }
        return IntervalCover(std::move(level));
    }
    std::vector<Interval> ivs;
    for (const auto& poly : fix.cells(m)) {
        double lo = INFINITY, hi = -INFINITY;
        for (const auto& v : poly) {
            lo = std::min(lo, v[axis]);
            hi = std::max(hi, v[axis]);
        }
        ivs.push_back({lo, hi});
    }
    return IntervalCover(std::move(ivs));
}

ProjectedCover project_cover(const FractalFixture& fix, int axis, double eps_budget, const CoverOptions& opts)
{
    if (!(eps_budget > 0.0)) throw InputError("eps_budget must be positive");
    std::vector<double> coords;
    for (const auto& p : fix.points) coords.push_back(p[axis]);

    double prev_total = INFINITY;
    double total = INFINITY;
    int last = 0;
    for (int m = 0; m <= opts.max_generation; ++m) {
        IntervalCover cover;
        try {
            cover = projection_at(fix, axis, m);
        } catch (const ParameterError&) {
            break;
        }
        prev_total = total;
        total = cover.total_length();
        last = m;
        if (total <= eps_budget) {
            if (!cover.covers_all(coords))
                throw ContractViolation("generation-" + std::to_string(m) + " cover misses a fixture point");
            return {std::move(cover), m};
        }
        if (m >= 2 && total >= prev_total) break;
    }
    std::string msg = "eps_budget " + std::to_string(eps_budget) + " unreachable within generation " +
                      std::to_string(last) + " (achieved total " + std::to_string(total) + ")";
    double q = total / prev_total;
    if (std::isfinite(q) && q < 1.0) {
        int need = last + static_cast<int>(std::ceil(std::log(eps_budget / total) / std::log(q)));
        msg += "; required m = " + std::to_string(need);
    } else {
        msg += "; cover totals do not shrink, the projection is not null at this resolution";
    }
    throw ParameterError(msg);
}

GapIntegralMap::GapIntegralMap(IntervalCover cover) : cover_(std::move(cover))
{
    const auto& iv = cover_.intervals();
    prefix_.assign(iv.size() + 1, 0.0);
    for (std::size_t k = 0; k < iv.size(); ++k) prefix_[k + 1] = prefix_[k] + iv[k].length();
    covered_at_zero_ = covered_below(0.0);
    plateau_.resize(iv.size());
    for (std::size_t k = 0; k < iv.size(); ++k) plateau_[k] = iv[k].a - prefix_[k] + covered_at_zero_;
}

double GapIntegralMap::covered_below(double t) const
{
    const auto& iv = cover_.intervals();
    auto it = std::upper_bound(iv.begin(), iv.end(), t, [](double x, const Interval& v) { return x < v.a; });
    if (it == iv.begin()) return 0.0;
    auto k = static_cast<std::size_t>(std::prev(it) - iv.begin());
    if (t <= iv[k].b) return prefix_[k] + (t - iv[k].a);
    return prefix_[k + 1];
}

double GapIntegralMap::operator()(double t) const
{
    const auto& iv = cover_.intervals();
    auto it = std::upper_bound(iv.begin(), iv.end(), t, [](double x, const Interval& v) { return x < v.a; });
    if (it == iv.begin()) return t + covered_at_zero_;
    auto k = static_cast<std::size_t>(std::prev(it) - iv.begin());
    if (t <= iv[k].b) return plateau_[k];
    return t - prefix_[k + 1] + covered_at_zero_;
}

GapIntegralMap gap_integral_map(const IntervalCover& cover)
{
    return GapIntegralMap(cover);
}

Vec PlanarSquashMap::operator()(const Vec& x) const
{
    return vec2(f1(x[0]), f2(x[1]));
}

std::vector<Vec> distinct_points(const std::vector<Vec>& pts)
{
    std::map<std::vector<double>, bool> seen;
    std::vector<Vec> out;
    for (const auto& p : pts) {
        Vec c = canonical_point(p);
        std::vector<double> key(c.data(), c.data() + c.size());
        if (seen.emplace(std::move(key), true).second) out.push_back(p);
    }
    return out;
}

PlanarSquashResult planar_squash_from_covers(const FractalFixture& fix, const IntervalCover& cx,
                                             const IntervalCover& cy, double eps, const PlanarOptions& opts)
{
    PlanarSquashResult res;
    res.map = {GapIntegralMap(cx), GapIntegralMap(cy)};
    res.image_bound = (cx.size() + 1) * (cy.size() + 1);

    const auto& pts = fix.points;
    std::vector<Vec> img;
    img.reserve(pts.size());
    for (const auto& p : pts) {
        img.push_back(res.map(p));
        res.sup_deviation = std::max(res.sup_deviation, (img.back() - p).norm());
    }
    res.image = distinct_points(img);

    res.lipschitz_ok = true;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
            double d = (pts[i] - pts[j]).norm();
            double e = (img[i] - img[j]).norm();
            if (d > 0.0) res.max_pair_ratio = std::max(res.max_pair_ratio, e / d);
            if (e > d + opts.lipschitz_tolerance) res.lipschitz_ok = false;
        }
    }
    (void)eps;
    return res;
}

PlanarSquashResult build_planar_squash(const FractalFixture& fix, double eps, const PlanarOptions& opts)
{
    if (!(eps > 0.0)) throw InputError("eps must be positive");
    auto cx = project_cover(fix, 0, eps, opts.cover);
    auto cy = project_cover(fix, 1, eps, opts.cover);
    PlanarSquashResult res = planar_squash_from_covers(fix, cx.cover, cy.cover, eps, opts);
    res.m_x = cx.generation;
    res.m_y = cy.generation;

    if (res.image.size() > res.image_bound)
        throw ContractViolation("planar squash image has " + std::to_string(res.image.size()) +
                                " points, above the bound " + std::to_string(res.image_bound));
    if (res.sup_deviation > std::sqrt(2.0) * eps)
        throw ContractViolation("planar squash moves a point by " + std::to_string(res.sup_deviation));
    if (!res.lipschitz_ok) throw ContractViolation("planar squash is not 1-Lipschitz on the fixture");
    return res;
}

namespace {

double image_content(const FractalFixture& fix, const PlanarSquashMap& f)
{
    std::vector<Box> boxes;
    if (fix.points.size() == 1) {
        boxes.push_back(Box::point(f(fix.points.front())));
    } else {
        for (const auto& poly : fix.cells(fix.generation)) {
            Vec lo = poly.front(), hi = poly.front();
            for (const auto& v : poly) {
                lo = lo.cwiseMin(v);
                hi = hi.cwiseMax(v);
            }
            // Each f_i is monotone, so the cell's bounding box maps into a box.
            boxes.push_back({f(lo), f(hi)});
        }
    }
    return hausdorff_content_boxes(boxes, 1.0).upper;
}

}  // namespace

std::vector<SquashReportRow> squash_report(const FractalFixture& fix, const std::vector<double>& eps_list,
                                           const PlanarOptions& opts)
{
    for (std::size_t i = 1; i < eps_list.size(); ++i)
        if (!(eps_list[i] < eps_list[i - 1])) throw InputError("eps_list must be decreasing");

    std::vector<SquashReportRow> rows;
    for (double eps : eps_list) {
        SquashReportRow row;
        row.eps = eps;
        PlanarSquashResult res;
        if (fix.projection_null_certified) {
            res = build_planar_squash(fix, eps, opts);
            row.certified = true;
            row.cover_total_x = res.map.f1.cover().total_length();
            row.cover_total_y = res.map.f2.cover().total_length();
        } else {
            auto cx = projection_at(fix, 0, fix.generation);
            auto cy = projection_at(fix, 1, fix.generation);
            res = planar_squash_from_covers(fix, cx, cy, eps, opts);
            res.m_x = res.m_y = fix.generation;
            row.cover_total_x = cx.total_length();
            row.cover_total_y = cy.total_length();
            row.flag = "projection-null not certified";
        }
        row.generation_x = res.m_x;
        row.generation_y = res.m_y;
        row.image_count = res.image.size();
        row.sup_dev = res.sup_deviation;
        row.h1_content_upper = image_content(fix, res.map);
        rows.push_back(row);
    }
    return rows;
}

}  // namespace lipsquash

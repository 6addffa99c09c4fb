#include "lipsquash/content.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>

namespace lipsquash {

Box Box::cube(const Vec& corner, double side)
{
    return {corner, corner + Vec::Constant(corner.size(), side)};
}

bool Box::contains(const Vec& p, double tol) const
{
    for (Eigen::Index i = 0; i < lo.size(); ++i)
        if (p[i] < lo[i] - tol || p[i] > hi[i] + tol) return false;
    return true;
}

bool Box::contains(const Box& b, double tol) const
{
    return contains(b.lo, tol) && contains(b.hi, tol);
}

Box Box::hull(const Box& b) const
{
    return {lo.cwiseMin(b.lo), hi.cwiseMax(b.hi)};
}

double CoverPiece::diameter() const
{
    if (kind == Kind::Box) return box.diameter();
    double d = 0.0;
    for (std::size_t i = 0; i < hull.size(); ++i)
        for (std::size_t j = i + 1; j < hull.size(); ++j) d = std::max(d, (hull[i] - hull[j]).norm());
    return d;
}

bool CoverPiece::covers(const Vec& p, double tol) const
{
    if (kind == Kind::Box) return box.contains(p, tol);
    for (const auto& q : hull)
        if ((q - p).lpNorm<Eigen::Infinity>() <= tol) return true;
    return false;
}

double CoverWitness::recompute() const
{
    double v = 0.0;
    for (const auto& piece : pieces) v += std::pow(piece.diameter(), s);
    return v;
}

std::vector<Box> point_leaves(const std::vector<Vec>& points)
{
    std::vector<Box> out;
    out.reserve(points.size());
    for (const auto& p : points) out.push_back(Box::point(p));
    return out;
}

std::vector<Box> cell_leaves(const std::vector<Vec>& corners, double side)
{
    if (!(side >= 0.0)) throw InputError("cell side must be nonnegative");
    std::vector<Box> out;
    out.reserve(corners.size());
    for (const auto& p : corners) out.push_back(Box::cube(p, side));
    return out;
}

std::vector<Box> chain_leaves(const std::vector<Vec>& polyline)
{
    std::vector<Box> out;
    if (polyline.size() == 1) out.push_back(Box::point(polyline.front()));
    for (std::size_t i = 0; i + 1 < polyline.size(); ++i)
        out.push_back({polyline[i].cwiseMin(polyline[i + 1]), polyline[i].cwiseMax(polyline[i + 1])});
    return out;
}

namespace {

using Cell = std::vector<std::uint64_t>;

bool less_msb(std::uint64_t a, std::uint64_t b)
{
    return a < b && a < (a ^ b);
}

// Z-order comparison without materializing interleaved keys.
bool morton_less(const Cell& a, const Cell& b)
{
    std::size_t dim = 0;
    std::uint64_t best = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        std::uint64_t x = a[i] ^ b[i];
        if (less_msb(best, x)) {
            dim = i;
            best = x;
        }
    }
    return a[dim] < b[dim];
}

struct Node {
    double cost;
    Box bbox;
    std::vector<Box> pieces;
};

class DyadicCover {
public:
    DyadicCover(const std::vector<Box>& leaves, double s, double delta, int levels)
        : leaves_(leaves), s_(s), delta_(delta), levels_(levels)
    {
    }

    Node run()
    {
        const int k = leaves_.front().dim();
        Vec origin = leaves_.front().lo;
        Vec top = leaves_.front().hi;
        for (const auto& b : leaves_) {
            origin = origin.cwiseMin(b.lo);
            top = top.cwiseMax(b.hi);
        }
        double extent = (top - origin).maxCoeff();
        double side = 1.0;
        if (extent > 0.0) side = std::exp2(std::ceil(std::log2(extent)));
        while (side < extent) side *= 2.0;

        const double cells = std::exp2(levels_);
        const auto max_cell = static_cast<std::uint64_t>(cells) - 1;
        cells_.assign(leaves_.size(), Cell(static_cast<std::size_t>(k)));
        for (std::size_t i = 0; i < leaves_.size(); ++i) {
            Vec c = leaves_[i].center();
            for (int d = 0; d < k; ++d) {
                double u = std::floor((c[d] - origin[d]) / side * cells);
                u = std::clamp(u, 0.0, static_cast<double>(max_cell));
                cells_[i][static_cast<std::size_t>(d)] = static_cast<std::uint64_t>(u);
            }
        }
        order_.resize(leaves_.size());
        std::iota(order_.begin(), order_.end(), std::size_t{0});
        std::stable_sort(order_.begin(), order_.end(),
                         [&](std::size_t a, std::size_t b) { return morton_less(cells_[a], cells_[b]); });
        return solve(0, 0, order_.size());
    }

private:
    double piece_cost(const Box& b) const
    {
        double d = b.diameter();
        if (d > delta_) return INFINITY;
        return std::pow(d, s_);
    }

    Node leaf(std::size_t idx) const
    {
        const Box& b = leaves_[idx];
        return {piece_cost(b), b, {b}};
    }

    std::uint64_t child_index(std::size_t idx, int level) const
    {
        const int bit = levels_ - 1 - level;
        std::uint64_t code = 0;
        for (auto c : cells_[idx]) code = (code << 1) | ((c >> bit) & 1u);
        return code;
    }

    Node solve(int level, std::size_t begin, std::size_t end)
    {
        if (end - begin == 1) return leaf(order_[begin]);

        std::vector<Node> children;
        if (level == levels_) {
            for (std::size_t i = begin; i < end; ++i) children.push_back(leaf(order_[i]));
        } else {
            std::size_t i = begin;
            while (i < end) {
                std::size_t j = i + 1;
                auto code = child_index(order_[i], level);
                while (j < end && child_index(order_[j], level) == code) ++j;
                children.push_back(solve(level + 1, i, j));
                i = j;
            }
        }
        if (children.size() == 1) return std::move(children.front());

        Box bbox = children.front().bbox;
        double split = 0.0;
        for (const auto& c : children) {
            bbox = bbox.hull(c.bbox);
            split += c.cost;
        }
        double merged = piece_cost(bbox);
        if (merged < split) return {merged, bbox, {bbox}};

        Node out{split, bbox, {}};
        for (auto& c : children)
            out.pieces.insert(out.pieces.end(), std::make_move_iterator(c.pieces.begin()),
                              std::make_move_iterator(c.pieces.end()));
        return out;
    }

    const std::vector<Box>& leaves_;
    double s_;
    double delta_;
    int levels_;
    std::vector<Cell> cells_;
    std::vector<std::size_t> order_;
};

CoverWitness make_witness(std::vector<Box> boxes, double s)
{
    CoverWitness w;
    w.s = s;
    w.pieces.reserve(boxes.size());
    for (auto& b : boxes) w.pieces.push_back({CoverPiece::Kind::Box, std::move(b), {}});
    w.value = w.recompute();
    return w;
}

}  // namespace

ContentEstimate hausdorff_content_boxes(const std::vector<Box>& leaves, double s, double delta,
                                        const ContentOptions& opts)
{
    if (!(s >= 0.0)) throw InputError("exponent s must be nonnegative");
    if (!(delta > 0.0)) throw InputError("delta must be positive");
    if (opts.levels < 0 || opts.levels > 62) throw InputError("levels must lie in [0, 62]");

    ContentEstimate est;
    est.s = s;
    est.delta = delta;
    est.witness.s = s;
    if (leaves.empty()) return est;

    const int k = leaves.front().dim();
    for (const auto& b : leaves) {
        if (b.dim() != k || b.hi.size() != k) throw InputError("leaves of mixed dimension");
        if ((b.hi - b.lo).minCoeff() < 0.0) throw InputError("leaf box with lo > hi");
        if (b.diameter() > delta)
            throw ParameterError("a leaf of diameter " + std::to_string(b.diameter()) + " exceeds delta");
    }

    DyadicCover search(leaves, s, delta, opts.levels);
    Node root = search.run();
    est.witness = make_witness(std::move(root.pieces), s);
    est.upper = est.witness.value;
    return est;
}

ContentEstimate hausdorff_content(const std::vector<Vec>& points, double s, double delta,
                                  const ContentOptions& opts)
{
    return hausdorff_content_boxes(point_leaves(points), s, delta, opts);
}

bool verify_witness(const CoverWitness& w, const std::vector<Box>& leaves, double delta)
{
    double scale = 1.0;
    for (const auto& b : leaves) scale = std::max({scale, b.lo.cwiseAbs().maxCoeff(), b.hi.cwiseAbs().maxCoeff()});
    const double tol = 1e-12 * scale;

    for (const auto& piece : w.pieces)
        if (piece.diameter() > delta) return false;

    std::size_t hint = 0;
    for (const auto& b : leaves) {
        bool degenerate = b.lo == b.hi;
        auto covers = [&](const CoverPiece& piece) {
            if (piece.kind == CoverPiece::Kind::Box) return piece.box.contains(b, tol);
            return degenerate && piece.covers(b.lo, tol);
        };
        if (hint < w.pieces.size() && covers(w.pieces[hint])) continue;
        bool found = false;
        for (std::size_t i = 0; i < w.pieces.size(); ++i) {
            if (covers(w.pieces[i])) {
                hint = i;
                found = true;
                break;
            }
        }
        if (!found) return false;
    }

    double v = w.recompute();
    return std::abs(v - w.value) <= 1e-12 * std::max(1.0, std::abs(v));
}

CoverWitness inflate_witness(const CoverWitness& w, double tau)
{
    if (!(tau >= 0.0)) throw InputError("tau must be nonnegative");
    CoverWitness out;
    out.s = w.s;
    for (const auto& piece : w.pieces) {
        Box b = piece.box;
        if (piece.kind == CoverPiece::Kind::Hull) {
            if (piece.hull.empty()) continue;
            b = Box::point(piece.hull.front());
            for (const auto& q : piece.hull) b = b.hull(Box::point(q));
        }
        b.lo.array() -= tau;
        b.hi.array() += tau;
        out.pieces.push_back({CoverPiece::Kind::Box, std::move(b), {}});
    }
    out.value = out.recompute();
    return out;
}

CoverWitness map_witness(const CoverWitness& w, const std::vector<Box>& leaves, const VecMap& f)
{
    CoverWitness out;
    out.s = w.s;
    std::vector<std::vector<Vec>> images(w.pieces.size());
    for (const auto& b : leaves) {
        if (b.lo != b.hi) throw DomainError("map_witness needs point leaves");
        for (std::size_t i = 0; i < w.pieces.size(); ++i) {
            if (w.pieces[i].covers(b.lo, 0.0)) {
                images[i].push_back(f(b.lo));
                break;
            }
        }
    }
    for (auto& img : images) {
        if (img.empty()) continue;
        CoverPiece piece;
        piece.kind = CoverPiece::Kind::Hull;
        piece.hull = std::move(img);
        out.pieces.push_back(std::move(piece));
    }
    out.value = out.recompute();
    return out;
}

DimensionProfile dimension_profile(const std::vector<Box>& leaves, const std::vector<double>& s_grid,
                                   const ProfileOptions& opts)
{
    for (std::size_t i = 1; i < s_grid.size(); ++i)
        if (!(s_grid[i] > s_grid[i - 1])) throw InputError("s_grid must be strictly increasing");

    DimensionProfile prof;
    prof.delta = opts.delta;
    if (leaves.empty()) return prof;
    Box all = leaves.front();
    for (const auto& b : leaves) all = all.hull(b);
    prof.diameter = all.diameter();
    const double diam = prof.diameter > 0.0 ? prof.diameter : 1.0;

    std::vector<Box> scaled;
    scaled.reserve(leaves.size());
    for (const auto& b : leaves) scaled.push_back({(b.lo - all.lo) / diam, (b.hi - all.lo) / diam});
    const double delta = opts.delta / diam;

    // The previous exponent's witness stays admissible after rescaling to diameter 1,
    // so carrying it forward keeps the profile nonincreasing.
    std::optional<CoverWitness> carried;
    for (double s : s_grid) {
        ContentEstimate est = hausdorff_content_boxes(scaled, s, delta, opts.content);
        CoverWitness best = est.witness;
        if (carried) {
            CoverWitness again = *carried;
            again.s = s;
            again.value = again.recompute();
            if (again.value < best.value) best = std::move(again);
        }
        ProfileRow row;
        row.s = s;
        row.normalized = best.value;
        row.upper = best.value * std::pow(diam, s);
        row.pieces = best.pieces.size();
        prof.rows.push_back(row);
        carried = std::move(best);
    }

    std::optional<std::size_t> knee;
    std::optional<std::size_t> drop;
    for (std::size_t i = 0; i < prof.rows.size(); ++i) {
        if (prof.rows[i].normalized >= 1.0 - opts.knee_tolerance) knee = i;
    }
    std::size_t from = knee ? *knee + 1 : 0;
    for (std::size_t i = from; i < prof.rows.size(); ++i) {
        if (prof.rows[i].normalized < opts.threshold) {
            drop = i;
            break;
        }
    }
    if (knee) {
        prof.proxy = prof.rows[*knee].s;
        prof.bracket_lo = prof.rows[*knee].s;
        if (drop) prof.bracket_hi = prof.rows[*drop].s;
    } else if (drop) {
        prof.proxy = prof.rows[*drop].s;
        prof.bracket_lo = *drop > 0 ? prof.rows[*drop - 1].s : 0.0;
        prof.bracket_hi = prof.rows[*drop].s;
    }
    return prof;
}

DimensionProfile dimension_profile(const std::vector<Vec>& points, const std::vector<double>& s_grid,
                                   const ProfileOptions& opts)
{
    return dimension_profile(point_leaves(points), s_grid, opts);
}

}  // namespace lipsquash

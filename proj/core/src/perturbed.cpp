#include "lipsquash/perturbed.hpp"

#include <algorithm>
#include <cmath>

namespace lipsquash {

namespace {

Vec point_at(const Segment& s, double t)
{
    if (t == s.t0) return s.p0;
    if (t == s.t1) return s.p1;
    return s.at(t);
}

struct Kept {
    double a, b;
    Vec fa, fb;
};

class Classifier {
public:
    Classifier(const VecMap& f, const ConeSpec& widened, double floor, int max_depth)
        : f_(f), cone_(widened), floor_(floor), max_depth_(max_depth)
    {
    }

    void run(const Segment& s, double a, double b, const Vec& fa, const Vec& fb, int depth, std::vector<Kept>& out) const
    {
        bool p = good(a, b, fa, fb);
        if (depth >= max_depth_) {
            if (p) out.push_back({a, b, fa, fb});
            return;
        }
        double m = 0.5 * (a + b);
        Vec fm = f_(point_at(s, m));
        if (good(a, m, fa, fm) == p && good(m, b, fm, fb) == p) {
            if (p) out.push_back({a, b, fa, fb});
            return;
        }
        run(s, a, m, fa, fm, depth + 1, out);
        run(s, m, b, fm, fb, depth + 1, out);
    }

    bool good(double a, double b, const Vec& fa, const Vec& fb) const
    {
        Vec v = (fb - fa) / (b - a);
        return cone_.norm(v) >= floor_ && cone_member(cone_, v);
    }

private:
    const VecMap& f_;
    const ConeSpec& cone_;
    double floor_;
    int max_depth_;
};

}  // namespace

double extremality(const ConeSpec& cone, const Vec& v)
{
    double n = cone.norm(v);
    return n > 0.0 ? cone.u.dot(v) / n : 0.0;
}

PerturbedResult perturbed_representation(const FragmentFamily& eta, const VecMap& f, const ConeSpec& cone,
                                         double delta_speed, const PerturbedOptions& opts)
{
    eta.validate();
    if (cone.kind != ConeSpec::Kind::Centred) throw DomainError("perturbed representations need a centred cone");
    if (!(delta_speed > 0.0)) throw InputError("speed floor must be positive");
    PerturbedResult res;
    res.r = opts.r < 0.0 ? 0.1 * cone.theta : opts.r;
    if (!(res.r > 0.0 && res.r < delta_speed)) throw ParameterError("need 0 < r < speed floor");
    if (opts.base_subsegments < 1 || opts.max_depth < 0) throw InputError("invalid subdivision options");

    std::vector<Vec> knots;
    for (std::size_t i = 0; i < eta.size(); ++i) {
        for (const auto& seg : eta.fragments[i].segments()) {
            if (seg.duration() <= 0.0) continue;
            Vec v = seg.velocity();
            if (cone.norm(v) < delta_speed * (1.0 - 1e-12))
                throw PreconditionError("fragment " + std::to_string(i) + " moves slower than the speed floor");
            if (!cone_member(cone, v))
                throw PreconditionError("fragment " + std::to_string(i) + " leaves the cone");
        }
        for (const auto& p : eta.fragments[i].pieces())
            for (const auto& v : p.values) knots.push_back(v);
    }
    std::vector<Vec> fk;
    fk.reserve(knots.size());
    for (const auto& k : knots) fk.push_back(f(k));
    for (std::size_t i = 0; i < knots.size(); ++i)
        for (std::size_t j = i + 1; j < knots.size(); ++j) {
            double d = cone.norm(knots[i] - knots[j]);
            if (cone.norm(fk[i] - fk[j]) > d * (1.0 + 1e-12) + 1e-15)
                throw InputError("f is not 1-Lipschitz on fragment knots " + std::to_string(i) + " and " +
                                 std::to_string(j));
        }

    res.pushed_cone = cone.widened(res.r);
    res.pushed_speed_floor = delta_speed - res.r;
    Classifier cls(f, res.pushed_cone, res.pushed_speed_floor, opts.max_depth);

    std::vector<std::vector<Interval>> keep(eta.size());
    for (std::size_t i = 0; i < eta.size(); ++i) {
        std::vector<Kept> kept;
        for (const auto& seg : eta.fragments[i].segments()) {
            if (seg.duration() <= 0.0) continue;
            const int K = opts.base_subsegments;
            std::vector<double> ts(K + 1);
            for (int k = 0; k <= K; ++k) ts[k] = k == K ? seg.t1 : seg.t0 + seg.duration() * k / K;
            Vec fa = f(point_at(seg, ts[0]));
            for (int k = 0; k < K; ++k) {
                Vec fb = f(point_at(seg, ts[k + 1]));
                cls.run(seg, ts[k], ts[k + 1], fa, fb, 0, kept);
                fa = std::move(fb);
            }
        }

        std::vector<FragmentPiece> pieces;
        for (const auto& k : kept) {
            keep[i].push_back({k.a, k.b});
            if (!pieces.empty() && pieces.back().knots.back() == k.a) {
                pieces.back().knots.push_back(k.b);
                pieces.back().values.push_back(k.fb);
            } else {
                pieces.push_back({{k.a, k.b}, {k.fa, k.fb}});
            }
        }
        if (!pieces.empty()) res.pushed.add(CurveFragment(std::move(pieces), 0.0), eta.weights[i]);
    }

    res.restricted = restriction_from_keep(eta, std::move(keep));
    restriction_mass_identity(eta, res.restricted.op);
    res.mass_loss = barycenter_mass(eta) - barycenter_mass(res.restricted.family);

    res.min_pushed_speed = INFINITY;
    res.certified = true;
    for (const auto& frag : res.pushed.fragments)
        for (const auto& seg : frag.segments()) {
            Vec v = seg.velocity();
            double speed = res.pushed_cone.norm(v);
            res.min_pushed_speed = std::min(res.min_pushed_speed, speed);
            res.min_pushed_extremality = std::min(res.min_pushed_extremality, extremality(res.pushed_cone, v));
            if (!(speed >= res.pushed_speed_floor && cone_member(res.pushed_cone, v))) res.certified = false;
        }
    if (!res.certified)
        throw ContractViolation("pushed family leaves the widened cone or drops below the speed floor");
    return res;
}

}  // namespace lipsquash

#include "lipsquash/compose.hpp"
#include "lipsquash/content.hpp"
#include "lipsquash/fragments.hpp"
#include "lipsquash/measure.hpp"
#include "lipsquash/perturbed.hpp"
#include "lipsquash/planar.hpp"
#include "lipsquash/realline.hpp"
#include "lipsquash/stability.hpp"

#include "support/generators.hpp"
#include "support/oracles.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace lipsquash;

namespace {

struct Outcome {
    bool ok = true;
    std::set<std::string> violated;
    std::ostringstream detail;

    void require(bool cond, const char* what)
    {
        if (!cond) {
            ok = false;
            violated.insert(what);
        }
    }
};

struct Criterion {
    int id;
    std::string name;
    double limit_s;
    std::function<void(Outcome&)> run;
};

std::vector<Vec> segment_sample(int n)
{
    std::vector<Vec> pts;
    for (int i = 0; i < n; ++i) pts.push_back(vec2(static_cast<double>(i) / (n - 1), 0.0));
    return pts;
}

void realline_contract(Outcome& out)
{
    const int n = 1000;
    const double eta = 0.1, r = 0.05, eps = 0.01;
    std::vector<double> x, w(n, 1.0 / n);
    for (int i = 0; i < n; ++i) x.push_back(-1.0 + 2.0 * i / (n - 1));
    auto mu = DiscreteMeasure::on_line(x, w);
    auto h = build_h(mu, eta, r, eps, 1.0);
    out.require(h.params.L == 10, "N = 10");

    double sup = 0.0;
    for (int i = 0; i <= 10000; ++i) {
        double t = -1.0 + 2.0 * i / 10000.0;
        sup = std::max(sup, std::abs(h(t) - t));
    }
    for (double t : x) sup = std::max(sup, std::abs(h(t) - t));
    out.require(sup < eps, "sup deviation < 0.01");

    std::vector<double> hx;
    for (double t : x) hx.push_back(h(t));
    double max_ratio = 0.0, max_far = 0.0;
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) {
            double gap = std::abs(x[a] - x[b]), dh = std::abs(hx[a] - hx[b]);
            max_ratio = std::max(max_ratio, dh / gap);
            out.require(dh <= 10.0 * gap, "N-Lipschitz on atom pairs");
            if (gap >= r) {
                max_far = std::max(max_far, dh / gap);
                if (dh > gap) out.require(false, "1-Lipschitz on far atom pairs");
            }
        }

    double E_mass = 0.0;
    std::set<double> img;
    for (auto a : h.E) {
        E_mass += mu.weight(a);
        img.insert(hx[a]);
    }
    const auto bound = static_cast<std::size_t>(std::ceil(2.0 / h.profile.R())) + 2;
    out.require(E_mass >= 1.0 - eta, "mu(E) >= 0.9");
    out.require(img.size() <= bound, "|h(E)| <= ceil(2/R) + 2");
    out.detail << "sup " << sup << ", max ratio " << max_ratio << ", far ratio " << max_far << ", mu(E) " << E_mass
               << ", |h(E)| " << img.size() << "/" << bound;
}

void large_scale_ratio(Outcome& out)
{
    oracle::Rng rng(2024);
    long long violations = 0, pairs = 0;
    double worst = 0.0;
    for (int prof = 0; prof < 20; ++prof) {
        double R = rng.uniform(0.005, 0.5);
        int N = rng.integer(2, 40);
        SquashProfile p(R, N, rng.uniform(-R, R));
        for (int i = 0; i < 100000; ++i) {
            double s = rng.uniform(-5.0, 5.0);
            double gap = rng.coin() ? rng.uniform(2.0 * R, 6.0 * R) : rng.uniform(2.0 * R, 10.0);
            double t = s + (rng.coin() ? gap : -gap);
            double d = std::abs(s - t);
            double k = std::floor(d / R);
            double ratio = std::abs(p.g(s) - p.g(t)) / d;
            double bound = (k + 1.0) / (k - 1.0);
            worst = std::max(worst, ratio / bound);
            if (ratio > bound) ++violations;
            ++pairs;
        }
    }
    out.require(violations == 0, "ratio within (k+1)/(k-1)");
    out.detail << pairs << " pairs, " << violations << " violations, worst ratio/bound " << worst;
}

void planar_pipeline(Outcome& out)
{
    auto fix = four_corner(5);
    for (double eps : {0.5, 0.25, 0.125}) {
        auto res = build_planar_squash(fix, eps);
        std::vector<Vec> img;
        for (const auto& p : fix.points) img.push_back(res.map(p));
        std::size_t distinct = distinct_points(img).size();
        int m = std::max(res.m_x, res.m_y);
        double grid_bound = std::pow(std::pow(2.0, m) + 1.0, 2.0);
        out.require(static_cast<double>(distinct) <= grid_bound, "image <= (2^m+1)^2");

        double sup = 0.0;
        for (std::size_t i = 0; i < img.size(); ++i) sup = std::max(sup, (img[i] - fix.points[i]).norm());
        for (int i = 0; i <= 200; ++i)
            for (int j = 0; j <= 200; ++j) {
                Vec q = vec2(i / 200.0, j / 200.0);
                sup = std::max(sup, (res.map(q) - q).norm());
            }
        out.require(sup <= std::sqrt(2.0) * eps, "sup deviation <= sqrt(2) eps");

        double excess = 0.0;
        for (std::size_t a = 0; a < img.size(); ++a)
            for (std::size_t b = a + 1; b < img.size(); ++b)
                excess = std::max(excess, (img[a] - img[b]).norm() - (fix.points[a] - fix.points[b]).norm());
        out.require(excess <= 1e-12, "1-Lipschitz on all pairs");
        out.detail << "eps " << eps << ": m " << m << ", image " << distinct << "/" << grid_bound << ", sup " << sup
                   << ", excess " << excess << "; ";
    }
}

void mass_identity(Outcome& out)
{
    oracle::Rng rng(404);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        auto eta = gen::family(rng);
        auto K = gen::slice_boxes(rng);
        auto r = slice_restriction(eta, K);
        double lhs = barycenter_mass(eta) - barycenter_mass(r.family);
        double rhs = 0.0;
        for (std::size_t i = 0; i < eta.size(); ++i)
            rhs += eta.weights[i] * (1.0 - r.op.relative_density[i]) * eta.fragments[i].arclength();
        auto m = restriction_mass_identity(eta, r.op);
        worst = std::max({worst, std::abs(lhs - rhs), std::abs(m.lhs - m.rhs)});
        out.require(std::abs(lhs - rhs) <= 1e-9 && m.holds, "mass identity within 1e-9");
    }
    out.detail << "100 families, worst |lhs - rhs| " << worst;
}

void averaging(Outcome& out)
{
    oracle::Rng rng(55);
    int checked = 0, vacuous = 0;
    while (checked < 1000) {
        int n = rng.integer(1, 50);
        std::vector<double> w(n);
        double total = 0.0;
        for (auto& x : w) total += (x = rng.uniform(0.01, 1.0));
        std::vector<std::pair<double, double>> xi;
        double mean = 0.0;
        for (int i = 0; i < n; ++i) {
            double v = rng.coin(0.4) ? 1.0 : rng.uniform(-1.0, 1.0);
            xi.push_back({v, w[i] / total});
            mean += v * w[i] / total;
        }
        double need = std::max(1.0 - mean, 0.0);
        if (need > 1.0) continue;
        double A = rng.uniform(need, 1.0);
        if (1.0 - mean > A) continue;
        ++checked;
        auto res = averaging_bound(xi, A);
        out.require(res.precondition_ok, "precondition recognized");
        double t = 1.0 - std::sqrt(A), mass = 0.0;
        for (const auto& [v, wt] : xi)
            if (v > t) mass += wt;
        out.require(mass >= t && res.holds, "mass above 1 - sqrt(A) at least 1 - sqrt(A)");
        vacuous += res.vacuous_strict;
    }
    out.detail << checked << " instances, " << vacuous << " with A = 0";
}

void stability_sweep_arc(Outcome& out)
{
    auto arc = SampledCurve::circle_arc(1.0, 0.0, M_PI / 2, 2001);
    for (double delta : {0.05, 0.1, 0.2}) {
        auto sw = stability_sweep(arc, radial_family(Vec::Zero(2), 1.0), delta, 0.2, 8);
        out.require(sw.first_holding.has_value(), "sweep finds eps");
        if (!sw.first_holding) continue;
        std::size_t k = *sw.first_holding;
        out.require(sw.rows[k].deviation_fraction <= delta, "deviation fraction <= delta");
        bool tail = true;
        for (std::size_t j = k + 1; j < sw.rows.size(); ++j)
            tail = tail && sw.rows[j].deviation_fraction <= sw.rows[j - 1].deviation_fraction;
        out.require(tail, "nonincreasing tail");
        out.detail << "delta " << delta << ": eps " << sw.rows[k].eps << " fraction " << sw.rows[k].deviation_fraction
                   << "; ";
    }
}

void sawtooth(Outcome& out)
{
    for (int n : {4, 16, 64}) {
        auto row = sawtooth_demo(n, 0.5);
        auto base = sawtooth_base(n);
        auto f = sawtooth_map(n);
        double sup = 0.0;
        for (const auto& x : base.x) sup = std::max(sup, (f(x) - x).lpNorm<Eigen::Infinity>());
        out.require(std::abs(row.sup_dev - 0.5 / n) <= 1e-9 && std::abs(sup - 0.5 / n) <= 1e-9, "sup-dev = 1/(2n)");
        out.require(row.deviation_fraction == 1.0, "deviation fraction 1");
        out.detail << "n " << n << ": sup " << row.sup_dev << " fraction " << row.deviation_fraction << "; ";
    }
}

void perturbed_sweep(Outcome& out)
{
    oracle::Rng rng(8);
    const double max_angle = 40.0 * M_PI / 180.0;
    FragmentFamily eta;
    double ymax = 0.0;
    for (int i = 0; i < 49; ++i) {
        double a = rng.uniform(-max_angle, max_angle);
        Vec p = rng.point(2, 0.0, 1.0);
        double t0 = rng.uniform(0.0, 0.4), t1 = t0 + rng.uniform(0.2, 0.6);
        Vec q = p + (t1 - t0) * vec2(std::cos(a), std::sin(a));
        ymax = std::max({ymax, p[1], q[1]});
        eta.add(CurveFragment::segment(p, q, {t0, t1}), rng.uniform(0.5, 1.0));
    }
    // Steepest allowed segment on top, so every cap cuts into it.
    Vec top0 = vec2(0.5, ymax + 0.05);
    eta.add(CurveFragment::segment(top0, top0 + 0.5 * vec2(std::cos(max_angle), std::sin(max_angle)), {0.2, 0.7}),
            1.0);
    ymax = top0[1] + 0.5 * std::sin(max_angle);
    eta.alberti_candidate = true;

    const double theta = 0.3, delta = 0.9, r = 0.03;
    auto cone = ConeSpec::centred(vec2(1, 0), theta);
    PerturbedOptions opts;
    opts.r = r;
    opts.base_subsegments = 4096;
    double prev = INFINITY, last = INFINITY;
    for (int i = 0; i <= 9; ++i) {
        double cap = ymax - 0.1 * std::pow(2.0, -i);
        VecMap f = [cap](const Vec& x) { return vec2(x[0], std::min(x[1], cap)); };
        auto res = perturbed_representation(eta, f, cone, delta, opts);
        out.require(res.mass_loss < prev, "mass loss strictly decreasing");
        // Only the top segment crosses the cap; its flattened part has length excess / sin(angle).
        double expect = 0.1 * std::pow(2.0, -i) / std::sin(max_angle);
        out.require(std::abs(res.mass_loss - expect) <= 2.0 * 0.5 / opts.base_subsegments, "mass loss matches cap oracle");
        out.require(res.certified, "certified");
        out.require(std::abs(res.pushed_cone.theta - (theta + r)) <= 1e-15, "pushed cone C(u, theta + r)");
        for (const auto& frag : res.pushed.fragments)
            for (const auto& s : frag.segments()) {
                out.require(cone_member(res.pushed_cone, s.velocity()), "pushed velocity in cone");
                out.require(s.velocity().norm() >= delta - r - 1e-12, "pushed speed >= delta - r");
            }
        out.detail << res.mass_loss << (i < 9 ? " " : "");
        prev = last = res.mass_loss;
    }
    out.require(last < 1e-3, "final mass loss < 1e-3");
    out.detail << " (mass loss by step)";
}

void content_sanity(Outcome& out)
{
    auto chain = chain_leaves(segment_sample(1001));
    auto seg = hausdorff_content_boxes(chain, 1.0);
    out.require(seg.upper <= 1.0 + 1e-9, "segment upper <= 1 + 1e-9");
    out.require(verify_witness(seg.witness, chain), "segment witness");

    std::vector<double> grid;
    for (int k = 1; k <= 30; ++k) grid.push_back(0.05 * k);
    oracle::Rng rng(9);
    std::vector<Vec> finite;
    for (int i = 0; i < 40; ++i) finite.push_back(rng.point(2));
    auto fp = dimension_profile(finite, grid);
    out.require(fp.proxy.has_value() && *fp.proxy <= 0.25, "finite-set proxy <= 0.25");

    std::vector<double> fine;
    for (int k = 0; k <= 20; ++k) fine.push_back(0.5 + 0.05 * k);
    auto fix = four_corner(6);
    auto cp = dimension_profile(cell_leaves(fix.points, fix.cell_side), fine);
    out.require(cp.proxy.has_value() && *cp.proxy >= 0.85 && *cp.proxy <= 1.15, "four-corner proxy in [0.85, 1.15]");

    out.detail << "segment upper " << seg.upper << ", finite proxy " << (fp.proxy ? *fp.proxy : NAN)
               << ", four-corner proxy " << (cp.proxy ? *cp.proxy : NAN);
}

void cross_module(Outcome& out)
{
    auto fix = four_corner(5);
    const double eps = 0.02;
    FixtureComposeParams p;
    p.eps = eps;
    auto comp = compose_fixture(fix, ComposeMode::Product, p);
    auto planar = build_planar_squash(fix, eps);

    std::vector<Vec> ci, pi;
    for (const auto& x : fix.points) {
        ci.push_back(comp.sigma.sigma(x));
        pi.push_back(planar.map(x));
    }
    double nc = static_cast<double>(distinct_points(ci).size());
    double np = static_cast<double>(distinct_points(pi).size());
    out.require(std::max(nc, np) <= 2.0 * std::min(nc, np), "cardinalities within factor 2");

    double dc = comp.sup_deviation, dp = planar.sup_deviation;
    for (std::size_t i = 0; i < fix.points.size(); ++i) {
        dc = std::max(dc, (ci[i] - fix.points[i]).norm());
        dp = std::max(dp, (pi[i] - fix.points[i]).norm());
    }
    out.require(comp.coordinate_sup_deviation < eps && dc <= std::sqrt(2.0) * eps, "compose deviation bound");
    out.require(dp <= std::sqrt(2.0) * eps, "planar deviation bound");
    out.require(comp.contracts_ok, "compose contracts");
    out.detail << "eps " << eps << ": compose image " << nc << " dev " << dc << ", planar image " << np << " dev "
               << dp;
}

}  // namespace

int main()
{
    std::vector<Criterion> all{
        {1, "real-line squash contract", 5.0, realline_contract},
        {2, "large-scale ratio bound", 5.0, large_scale_ratio},
        {3, "planar squash pipeline", 30.0, planar_pipeline},
        {4, "restriction mass identity", 10.0, mass_identity},
        {5, "averaging bound", 1.0, averaging},
        {6, "stability sweep on circle arc", 10.0, stability_sweep_arc},
        {7, "sawtooth necessity", 2.0, sawtooth},
        {8, "perturbed representation sweep", 20.0, perturbed_sweep},
        {9, "content estimator sanity", 60.0, content_sanity},
        {10, "compose vs planar consistency", 30.0, cross_module},
    };
    int failed = 0;
    for (const auto& c : all) {
        Outcome out;
        auto start = std::chrono::steady_clock::now();
        try {
            c.run(out);
        } catch (const std::exception& e) {
            out.require(false, "no exception");
            out.detail << "exception: " << e.what();
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        out.require(secs < c.limit_s, "runtime limit");
        if (!out.ok) ++failed;
        for (const auto& v : out.violated) out.detail << " [violated: " << v << "]";
        std::printf("%s criterion %d: %s (%.3f s, limit %.0f s) %s\n", out.ok ? "PASS" : "FAIL", c.id, c.name.c_str(),
                    secs, c.limit_s, out.detail.str().c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(all.size()) - failed, all.size());
    return failed == 0 ? 0 : 1;
}

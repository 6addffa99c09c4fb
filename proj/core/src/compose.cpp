#include "lipsquash/compose.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <sstream>

namespace lipsquash {

namespace {

std::string point_str(const Vec& p)
{
    std::ostringstream os;
    os << '(';
    for (Eigen::Index i = 0; i < p.size(); ++i) os << (i ? ", " : "") << p[i];
    os << ')';
    return os.str();
}

std::vector<double> sorted_unique(std::vector<double> v)
{
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

}  // namespace

double euclidean_distance(const Vec& x, const Vec& y)
{
    return (x - y).norm();
}

ScalarMap mcshane_extend(const std::vector<Vec>& points, const std::vector<double>& values, const Metric& d, double L)
{
    if (points.empty() || points.size() != values.size()) throw InputError("need matching nonempty samples and values");
    if (!(L >= 0.0)) throw InputError("Lipschitz constant must be nonnegative");
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t j = i + 1; j < points.size(); ++j) {
            double dij = d(points[i], points[j]);
            double gap = std::abs(values[i] - values[j]);
            if (gap > L * dij + 1e-12 * std::max(1.0, gap))
                throw InputError("samples " + point_str(points[i]) + " and " + point_str(points[j]) +
                                 " violate the Lipschitz bound: |dv| = " + std::to_string(gap) +
                                 " > L d = " + std::to_string(L * dij));
        }
    return [points, values, d, L](const Vec& x) {
        double best = INFINITY;
        for (std::size_t i = 0; i < points.size(); ++i) best = std::min(best, values[i] + L * d(x, points[i]));
        return best;
    };
}

ExtensionParams extension_parameters(double delta, double eps, double lip_phi)
{
    if (!(delta > 0.0 && eps > 0.0 && lip_phi >= 0.0)) throw ParameterError("need delta > 0, eps > 0, Lip >= 0");
    double Delta = 0.5 * eps / (2.0 * lip_phi + delta);
    return {Delta, std::min(delta * Delta, eps - Delta * (2.0 * lip_phi + delta))};
}

double max_feasible_eps0(double delta, double eps, double lip_phi)
{
    return delta * eps / (2.0 * lip_phi + 2.0 * delta);
}

Extension extend_with_error(const std::vector<Vec>& S, const std::vector<double>& g_on_S, const ScalarMap& phi,
                            double lip_phi, double delta, double eps, const std::vector<Vec>& grid)
{
    if (S.empty() || S.size() != g_on_S.size()) throw InputError("need matching nonempty samples and values");
    Extension ext;
    ext.params = extension_parameters(delta, eps, lip_phi);

    std::vector<double> phi_S(S.size());
    for (std::size_t i = 0; i < S.size(); ++i) {
        phi_S[i] = phi(S[i]);
        ext.sample_deviation = std::max(ext.sample_deviation, std::abs(g_on_S[i] - phi_S[i]));
    }
    if (!(ext.sample_deviation < ext.params.eps0)) {
        std::ostringstream os;
        os << "no admissible (Delta, eps0): sup |g - phi| on S is " << ext.sample_deviation
           << "; feasible pairs need Delta < " << eps / (2.0 * lip_phi + delta)
           << " and eps0 <= min(delta Delta, eps - Delta (2 Lip + delta)), at most "
           << max_feasible_eps0(delta, eps, lip_phi) << ", and the grid choice gives eps0 = " << ext.params.eps0;
        throw ParameterError(os.str());
    }

    std::vector<Vec> anchors = S;
    std::vector<double> values = g_on_S;
    std::vector<double> phi_a = phi_S;
    for (const auto& x : grid) {
        double dist = INFINITY;
        for (const auto& s : S) dist = std::min(dist, (x - s).norm());
        if (dist >= ext.params.Delta) {
            anchors.push_back(x);
            double v = phi(x);
            values.push_back(v);
            phi_a.push_back(v);
        }
    }
    ext.anchors = anchors.size();

    for (std::size_t i = 0; i < S.size(); ++i)
        for (std::size_t j = i + 1; j < S.size(); ++j) {
            double bound = std::abs(phi_S[i] - phi_S[j]) + delta * (S[i] - S[j]).norm();
            if (std::abs(g_on_S[i] - g_on_S[j]) > bound + 1e-12)
                throw InputError("samples " + point_str(S[i]) + " and " + point_str(S[j]) +
                                 " violate |g(y)-g(z)| <= |phi(y)-phi(z)| + delta d(y,z)");
        }

    ext.g = [anchors, values, phi_a, phi, delta](const Vec& x) {
        double px = phi(x);
        double best = INFINITY;
        for (std::size_t i = 0; i < anchors.size(); ++i)
            best = std::min(best, values[i] + std::abs(px - phi_a[i]) + delta * (x - anchors[i]).norm());
        return best;
    };

    std::vector<Vec> pts = S;
    pts.insert(pts.end(), grid.begin(), grid.end());
    std::vector<double> gv(pts.size()), pv(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        gv[i] = ext.g(pts[i]);
        pv[i] = i < S.size() ? phi_S[i] : phi(pts[i]);
        ext.sup_deviation = std::max(ext.sup_deviation, std::abs(gv[i] - pv[i]));
    }
    ext.max_excess = -INFINITY;
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
            double excess = std::abs(gv[i] - gv[j]) - std::abs(pv[i] - pv[j]) - delta * (pts[i] - pts[j]).norm();
            ext.max_excess = std::max(ext.max_excess, excess);
        }
    if (!(ext.sup_deviation < eps))
        throw ContractViolation("extension deviates from phi by " + std::to_string(ext.sup_deviation) +
                                " >= eps = " + std::to_string(eps));
    if (ext.max_excess > 1e-12)
        throw ContractViolation("extension breaks the perturbation bound by " + std::to_string(ext.max_excess));
    return ext;
}

FlatnessRadius flatness_pushforward_radius(const std::vector<Vec>& S, const std::vector<double>& f_on_S, double rho,
                                           double delta)
{
    if (S.size() != f_on_S.size()) throw InputError("need one value per sample");
    if (!(rho > 0.0 && delta > 0.0)) throw ParameterError("need rho > 0 and delta > 0");
    for (std::size_t i = 0; i < S.size(); ++i)
        for (std::size_t j = i + 1; j < S.size(); ++j) {
            double d = (S[i] - S[j]).norm();
            if (d <= rho && std::abs(f_on_S[i] - f_on_S[j]) > delta * d + 1e-12)
                throw InputError("flatness fails on samples " + point_str(S[i]) + " and " + point_str(S[j]));
        }

    FlatnessRadius out;
    out.r = rho * delta;
    out.min_ratio = INFINITY;
    std::map<double, std::vector<std::size_t>> fibers;
    for (std::size_t i = 0; i < S.size(); ++i) fibers[f_on_S[i]].push_back(i);
    for (auto it = fibers.begin(); it != fibers.end(); ++it) {
        for (auto jt = std::next(it); jt != fibers.end() && jt->first - it->first <= out.r; ++jt) {
            double dist = INFINITY;
            for (auto a : it->second)
                for (auto b : jt->second) dist = std::min(dist, (S[a] - S[b]).norm());
            double gap = jt->first - it->first;
            ++out.pairs_checked;
            out.min_ratio = std::min(out.min_ratio, dist * delta / gap);
            if (dist < gap / delta - 1e-12)
                throw ContractViolation("fibers over values " + std::to_string(it->first) + " and " +
                                        std::to_string(jt->first) + " are closer than |s - t| / delta");
        }
    }
    return out;
}

OracleChecks check_oracle(const BasicPerturbationOracle& o, const std::vector<Vec>& extra)
{
    OracleChecks c;
    const double kappa = o.flatness();
    std::vector<Vec> pts = o.S;
    pts.insert(pts.end(), extra.begin(), extra.end());
    std::vector<double> fv(pts.size()), tv(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        fv[i] = o.f(pts[i]);
        tv[i] = o.TF(pts[i]);
        c.max_accuracy_gap = std::max(c.max_accuracy_gap, std::abs(fv[i] - tv[i]));
    }
    c.max_perturbation_excess = -INFINITY;
    c.max_flatness_excess = -INFINITY;
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
            double d = (pts[i] - pts[j]).norm();
            double df = std::abs(fv[i] - fv[j]);
            c.max_perturbation_excess = std::max(c.max_perturbation_excess, df - std::abs(tv[i] - tv[j]) - kappa * d);
            if (i < o.S.size() && j < o.S.size() && d <= o.rho)
                c.max_flatness_excess = std::max(c.max_flatness_excess, df - kappa * d);
        }
    c.perturbation_ok = c.max_perturbation_excess <= 1e-12;
    c.accuracy_ok = c.max_accuracy_gap < 0.5 * o.eps0;
    c.local_flatness_ok = c.max_flatness_excess <= 1e-12;
    return c;
}

BasicPerturbationOracle exact_projection_oracle(const std::vector<Vec>& S, const Vec& T, double theta, double rho,
                                                double eps0)
{
    if (S.empty()) throw InputError("empty sample set");
    if (T.size() != S.front().size()) throw InputError("functional and sample dimensions differ");
    BasicPerturbationOracle o;
    o.name = "exact projection";
    o.S = S;
    o.TF = [T](const Vec& x) { return T.dot(x); };
    o.f = o.TF;
    o.rho = rho;
    o.theta = theta;
    o.norm_T = T.norm();
    o.lip_F = 1.0;
    o.eps0 = eps0;
    return o;
}

BasicPerturbationOracle gap_projection_oracle(const FractalFixture& fix, int axis, double theta, double eps0)
{
    if (axis < 0 || axis > 1) throw InputError("axis must be 0 or 1");
    if (!(eps0 > 0.0)) throw ParameterError("eps0 must be positive");
    auto pc = project_cover(fix, axis, 0.5 * eps0 * (1.0 - 1e-9));
    auto gap = std::make_shared<GapIntegralMap>(pc.cover);
    BasicPerturbationOracle o;
    o.name = "gap projection";
    o.S = fix.points;
    o.TF = [axis](const Vec& x) { return x[axis]; };
    o.f = [gap, axis](const Vec& x) { return (*gap)(x[axis]); };
    double g = pc.cover.min_gap();
    o.rho = std::isfinite(g) ? 0.49 * g : 1.0;
    o.theta = theta;
    o.norm_T = 1.0;
    o.lip_F = 1.0;
    o.eps0 = eps0;
    return o;
}

double required_oracle_accuracy(double eps, double delta, double norm_T, double lip_F)
{
    double scale = norm_T * lip_F;
    return extension_parameters(delta * scale, eps, scale).eps0;
}

double theta_for_budget(double eta, double delta)
{
    int N = squash_height(eta);
    double theta = 1.0 - delta / (3.0 * N) * (1.0 - 1e-9);
    if (!(theta > 0.0 && theta < 1.0)) throw ParameterError("no theta in (0,1) meets the width budget");
    return theta;
}

ComposedSquash compose_squash(const BasicPerturbationOracle& oracle, const DiscreteMeasure& mu, double eta, double eps,
                              double delta, const std::vector<Vec>& grid)
{
    const int N = squash_height(eta);
    if (!(oracle.theta > 0.0 && oracle.theta < 1.0)) throw ParameterError("oracle width must lie in (0,1)");
    if (N * 3.0 * (1.0 - oracle.theta) > delta * (1.0 + 1e-12))
        throw ParameterError("width budget fails: N * 3(1 - theta) = " + std::to_string(N * 3.0 * (1.0 - oracle.theta)) +
                             " > delta; need theta >= " + std::to_string(1.0 - delta / (3.0 * N)));
    const double scale = oracle.norm_T * oracle.lip_F;
    const double needed = required_oracle_accuracy(eps, delta, oracle.norm_T, oracle.lip_F);
    if (!(oracle.eps0 > 0.0 && oracle.eps0 <= needed))
        throw ParameterError("oracle accuracy eps0 = " + std::to_string(oracle.eps0) + " must lie in (0, " +
                             std::to_string(needed) + "]");

    ComposedSquash out;
    out.delta = delta;
    out.eps = eps;
    out.eta = eta;

    const auto& S = oracle.S;
    auto oc = check_oracle(oracle);
    out.checks.oracle_ok = oc.all();
    if (!oc.perturbation_ok) throw PreconditionError("oracle perturbation bound fails on the samples");
    if (!oc.accuracy_ok) throw PreconditionError("oracle is not within eps0 / 2 of T F on the samples");
    if (!oc.local_flatness_ok) throw PreconditionError("oracle is not flat on rho-close samples");

    std::vector<double> fS(S.size()), tS(S.size());
    double D = 0.0;
    for (std::size_t i = 0; i < S.size(); ++i) {
        fS[i] = oracle.f(S[i]);
        tS[i] = oracle.TF(S[i]);
        D = std::max(D, std::abs(fS[i]));
    }
    D = std::max(D, 1e-9);

    std::vector<std::size_t> atom_to_sample(mu.size());
    DiscreteMeasure sample_index(mu.dim(), S, std::vector<double>(S.size(), 1.0));
    for (std::size_t a = 0; a < mu.size(); ++a) {
        auto k = sample_index.find(mu.point(a));
        if (!k) throw InputError("measure atom " + point_str(mu.point(a)) + " is not a sample point");
        atom_to_sample[a] = *k;
    }
    std::vector<double> sample_f(sample_index.size());
    for (std::size_t k = 0; k < sample_index.size(); ++k) sample_f[k] = oracle.f(sample_index.point(k));

    DiscreteMeasure nu = pushforward_line(mu, oracle.f);
    out.r = flatness_pushforward_radius(S, fS, oracle.rho, oracle.flatness()).r;
    out.h = build_h(nu, eta, out.r, 0.5 * oracle.eps0, D);

    std::vector<double> gS(S.size());
    for (std::size_t i = 0; i < S.size(); ++i) gS[i] = out.h(fS[i]);
    out.extension = extend_with_error(S, gS, oracle.TF, scale, delta * scale, eps, grid);
    out.g = out.extension.g;
    out.checks.lipschitz_ok = out.extension.max_excess <= 1e-12;
    out.checks.max_excess = out.extension.max_excess;
    out.checks.sup_deviation = out.extension.sup_deviation;
    out.checks.deviation_ok = out.extension.sup_deviation < eps;

    std::vector<bool> in_H(nu.size(), false);
    for (auto k : out.h.E) in_H[k] = true;
    std::vector<double> img;
    for (std::size_t a = 0; a < mu.size(); ++a) {
        auto k = nu.find(vec1(sample_f[atom_to_sample[a]]));
        if (k && in_H[*k]) {
            out.E.push_back(a);
            img.push_back(out.g(mu.point(a)));
        }
    }
    out.finite_image = sorted_unique(img);
    out.checks.E_mass = mu.mass_of(out.E);
    out.checks.mass_ok = out.checks.E_mass >= 1.0 - eta - 1e-12;
    out.checks.image_size = out.finite_image.size();
    out.checks.image_bound = out.h.checks.image_bound;
    out.checks.image_ok = out.checks.image_size <= out.checks.image_bound;

    if (!out.checks.lipschitz_ok) throw ContractViolation("composed map breaks the perturbation bound");
    if (!out.checks.deviation_ok) throw ContractViolation("composed map leaves the eps band around T F");
    if (!out.checks.mass_ok) throw ContractViolation("retained set carries mass below 1 - eta");
    if (!out.checks.image_ok) throw ContractViolation("image of the retained set exceeds its bound");
    return out;
}

Recombination coordinate_recombine(const VecMap& F, double lip_F, const std::vector<ScalarMap>& g,
                                   const Eigen::MatrixXd& basis, int d, double delta, const std::vector<Vec>& samples,
                                   const std::vector<Vec>& E, const std::vector<std::vector<double>>& H, double C)
{
    const Eigen::Index m = basis.cols();
    if (basis.rows() != m) throw InputError("basis must be square");
    if ((basis.transpose() * basis - Eigen::MatrixXd::Identity(m, m)).cwiseAbs().maxCoeff() > 1e-10)
        throw InputError("basis is not orthonormal");
    if (d < 0 || d > m) throw InputError("subspace dimension out of range");
    if (static_cast<Eigen::Index>(g.size()) != m) throw InputError("one scalar map per basis vector is required");
    for (Eigen::Index i = d; i < m; ++i)
        if (!g[i]) throw InputError("missing scalar map for a complementary coordinate");
    if (!H.empty() && static_cast<Eigen::Index>(H.size()) != m - d)
        throw InputError("one value set per complementary coordinate is required");

    Eigen::MatrixXd P = basis.leftCols(d) * basis.leftCols(d).transpose();
    Recombination out;
    out.sigma = [F, g, basis, P, d, m](const Vec& x) {
        Vec y = P * F(x);
        for (Eigen::Index i = d; i < m; ++i) y += g[i](x) * basis.col(i);
        return y;
    };
    if (C < 0.0) C = std::sqrt(static_cast<double>(m));
    out.lipschitz_bound = lip_F * (1.0 + delta * C);

    std::vector<Vec> sv;
    sv.reserve(samples.size());
    for (const auto& x : samples) sv.push_back(out.sigma(x));
    for (std::size_t i = 0; i < samples.size(); ++i)
        for (std::size_t j = i + 1; j < samples.size(); ++j) {
            double dx = (samples[i] - samples[j]).norm();
            if (dx > 0.0) out.lipschitz_ratio = std::max(out.lipschitz_ratio, (sv[i] - sv[j]).norm() / dx);
        }
    out.lipschitz_ok = out.lipschitz_ratio <= out.lipschitz_bound + 1e-12;

    std::vector<std::vector<double>> hs;
    for (const auto& h : H) hs.push_back(sorted_unique(h));
    for (const auto& x : E) {
        Vec y = out.sigma(x);
        out.image.push_back(y);
        for (std::size_t k = 0; k < hs.size(); ++k) {
            double c = basis.col(d + static_cast<Eigen::Index>(k)).dot(y);
            auto it = std::lower_bound(hs[k].begin(), hs[k].end(), c - 1e-12 * std::max(1.0, std::abs(c)));
            if (it == hs[k].end() || std::abs(*it - c) > 1e-12 * std::max(1.0, std::abs(c))) out.containment_ok = false;
        }
    }
    out.image = distinct_points(out.image);
    return out;
}

GoodSetWitness good_set_witness(const DiscreteMeasure& mu, const VecMap& f, const std::vector<std::size_t>& E, int d,
                                double delta, double eta, double eps)
{
    if (d < 0) throw ParameterError("d must be nonnegative");
    if (!(delta > 0.0)) throw ParameterError("delta must be positive");
    if (!(eta > 0.0 && eta < 1.0)) throw ParameterError("eta must lie in (0,1)");
    if (!(eps > 0.0)) throw ParameterError("eps must be positive");
    if (!f) throw InputError("map is required");

    GoodSetWitness out;
    out.s = d + delta;
    std::vector<Vec> img;
    img.reserve(E.size());
    for (auto a : E) {
        if (a >= mu.size()) throw InputError("atom index out of range");
        img.push_back(f(mu.point(a)));
    }
    out.E_mass = mu.mass_of(E);
    if (img.empty()) {
        out.witness.s = out.s;
        out.member = out.E_mass >= 1.0 - eta - 1e-12;
        out.radius = out.member ? INFINITY : 0.0;
        return out;
    }
    auto est = hausdorff_content(img, out.s);
    out.content_upper = est.upper;
    out.witness = std::move(est.witness);
    out.member = out.E_mass >= 1.0 - eta - 1e-12 && out.content_upper < eps;
    if (!out.member || inflate_witness(out.witness, 0.0).recompute() >= eps) return out;

    double scale = 1.0;
    for (const auto& y : img) scale = std::max(scale, y.lpNorm<Eigen::Infinity>());
    double lo = 0.0, hi = 1e-12 * scale;
    while (inflate_witness(out.witness, hi).recompute() < eps) {
        lo = hi;
        hi *= 2.0;
    }
    for (int it = 0; it < 100; ++it) {
        double mid = 0.5 * (lo + hi);
        (inflate_witness(out.witness, mid).recompute() < eps ? lo : hi) = mid;
    }
    out.radius = lo;
    return out;
}

GoodSetTrace good_set_trace(const DiscreteMeasure& mu, const std::vector<VecMap>& maps,
                            const std::vector<std::size_t>& E, int d, double delta, double eta, double eps)
{
    GoodSetTrace out;
    for (std::size_t n = 0; n < maps.size(); ++n) {
        out.steps.push_back(good_set_witness(mu, maps[n], E, d, delta, eta, eps));
        if (n == 0) {
            out.sup_change.push_back(0.0);
            continue;
        }
        double change = 0.0;
        std::vector<Box> leaves;
        for (auto a : E) {
            Vec y = maps[n](mu.point(a));
            change = std::max(change, (y - maps[n - 1](mu.point(a))).lpNorm<Eigen::Infinity>());
            leaves.push_back(Box::point(y));
        }
        out.sup_change.push_back(change);
        const auto& prev = out.steps[n - 1];
        if (prev.member && change < prev.radius) {
            auto grown = inflate_witness(prev.witness, change);
            if (!verify_witness(grown, leaves) || grown.value >= eps || !out.steps[n].member)
                out.radius_consistent = false;
        }
    }
    return out;
}

std::vector<Vec> box_grid(const std::vector<Vec>& pts, int per_axis, double margin)
{
    if (pts.empty()) throw InputError("empty point set");
    if (per_axis < 2) throw InputError("grid needs at least two points per axis");
    Vec lo = pts.front(), hi = pts.front();
    for (const auto& p : pts) {
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
    }
    double pad = margin * std::max((hi - lo).norm(), 1e-9);
    lo.array() -= pad;
    hi.array() += pad;
    const Eigen::Index dim = lo.size();
    std::vector<Vec> out;
    std::vector<int> idx(dim, 0);
    while (true) {
        Vec p(dim);
        for (Eigen::Index k = 0; k < dim; ++k) p[k] = lo[k] + (hi[k] - lo[k]) * idx[k] / (per_axis - 1);
        out.push_back(p);
        Eigen::Index k = 0;
        while (k < dim && ++idx[k] == per_axis) idx[k++] = 0;
        if (k == dim) break;
    }
    return out;
}

FixtureCompose compose_fixture(const FractalFixture& fix, ComposeMode mode, const FixtureComposeParams& p)
{
    const auto grid = box_grid(fix.points, p.grid);
    const DiscreteMeasure mu = fix.natural_measure.normalized();
    FixtureCompose out;
    out.mode = mode;

    std::vector<int> axes = mode == ComposeMode::Product ? std::vector<int>{0, 1} : std::vector<int>{1};
    const double eta_axis = p.eta / static_cast<double>(axes.size());
    const double theta = p.theta < 0.0 ? theta_for_budget(eta_axis, p.delta) : p.theta;
    const double eps0 = required_oracle_accuracy(p.eps, p.delta);
    for (int axis : axes) {
        auto oracle = gap_projection_oracle(fix, axis, theta, eps0);
        out.coords.push_back(compose_squash(oracle, mu, eta_axis, p.eps, p.delta, grid));
    }

    std::vector<bool> keep(mu.size(), true);
    for (const auto& c : out.coords) {
        std::vector<bool> in(mu.size(), false);
        for (auto a : c.E) in[a] = true;
        for (std::size_t a = 0; a < mu.size(); ++a) keep[a] = keep[a] && in[a];
    }
    std::vector<Vec> E_pts;
    for (std::size_t a = 0; a < mu.size(); ++a)
        if (keep[a]) {
            out.E.push_back(a);
            E_pts.push_back(mu.point(a));
        }
    out.E_mass = mu.mass_of(out.E);

    std::vector<ScalarMap> g(2);
    std::vector<std::vector<double>> H;
    int d = 0;
    if (mode == ComposeMode::Product) {
        g[0] = out.coords[0].g;
        g[1] = out.coords[1].g;
        H = {out.coords[0].finite_image, out.coords[1].finite_image};
    } else {
        d = 1;
        g[1] = out.coords[0].g;
        H = {out.coords[0].finite_image};
    }
    std::vector<Vec> samples = fix.points;
    samples.insert(samples.end(), grid.begin(), grid.end());
    VecMap id = [](const Vec& x) { return x; };
    out.sigma = coordinate_recombine(id, 1.0, g, Eigen::MatrixXd::Identity(2, 2), d, p.delta, samples, E_pts, H);
    out.image = out.sigma.image;

    for (const auto& x : samples) {
        Vec y = out.sigma.sigma(x);
        out.sup_deviation = std::max(out.sup_deviation, (y - x).norm());
        out.coordinate_sup_deviation = std::max(out.coordinate_sup_deviation, (y - x).lpNorm<Eigen::Infinity>());
    }
    out.contracts_ok = out.sigma.lipschitz_ok && out.sigma.containment_ok && out.E_mass >= 1.0 - p.eta - 1e-12 &&
                       out.coordinate_sup_deviation < p.eps;
    for (const auto& c : out.coords) out.contracts_ok = out.contracts_ok && c.checks.all();
    return out;
}

}  // namespace lipsquash

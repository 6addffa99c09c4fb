#include "lipsquash/stability.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace lipsquash {

SampledCurve SampledCurve::from_function(const std::function<Vec(double)>& gamma, double a, double b,
                                         std::size_t samples)
{
    if (samples < 2) throw InputError("a sampled curve needs at least two samples");
    if (!(b > a)) throw InputError("curve parameter interval must have positive length");
    SampledCurve c;
    c.t.reserve(samples);
    c.x.reserve(samples);
    for (std::size_t i = 0; i < samples; ++i) {
        double t = i + 1 == samples ? b : a + (b - a) * static_cast<double>(i) / static_cast<double>(samples - 1);
        c.t.push_back(t);
        c.x.push_back(gamma(t));
    }
    return c;
}

SampledCurve SampledCurve::segment(const Vec& p, const Vec& q, std::size_t samples)
{
    double len = (q - p).norm();
    if (!(len > 0.0)) throw InputError("degenerate segment");
    return from_function([&](double t) -> Vec { return p + (q - p) * (t / len); }, 0.0, len, samples);
}

SampledCurve SampledCurve::circle_arc(double radius, double angle0, double angle1, std::size_t samples,
                                      const Vec& center)
{
    if (!(radius > 0.0)) throw InputError("circle radius must be positive");
    double sweep = angle1 - angle0;
    double len = radius * std::abs(sweep);
    double dir = sweep >= 0.0 ? 1.0 : -1.0;
    return from_function(
        [&](double t) -> Vec {
            double a = angle0 + dir * t / radius;
            return center + radius * vec2(std::cos(a), std::sin(a));
        },
        0.0, len, samples);
}

std::vector<Vec> sample_derivatives(const SampledCurve& c)
{
    const std::size_t n = c.size();
    std::vector<Vec> d(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t lo = i == 0 ? 0 : i - 1;
        std::size_t hi = i + 1 == n ? n - 1 : i + 1;
        d[i] = (c.x[hi] - c.x[lo]) / (c.t[hi] - c.t[lo]);
    }
    return d;
}

namespace {

struct PieceCheck {
    double slope = 0.0;
    double deviation = 0.0;
    Vec w;
};

PieceCheck check_piece(const SampledCurve& g, const std::vector<Vec>& d, std::size_t i, std::size_t j,
                       const Norm& norm)
{
    PieceCheck pc;
    double len = g.t[j] - g.t[i];
    pc.w = (g.x[j] - g.x[i]) / len;
    pc.slope = norm(pc.w);
    for (std::size_t k = i; k <= j; ++k) pc.deviation = std::max(pc.deviation, norm(d[k] - pc.w));
    return pc;
}

}  // namespace

SlopePartition slope_partition(const SampledCurve& gamma, double s, double eps, const Norm& norm)
{
    if (!(s < 1.0)) throw InputError("slope floor must be below 1");
    if (!(eps > 0.0)) throw InputError("eps must be positive");
    const std::size_t n = gamma.size();
    if (n < 2) throw InputError("a sampled curve needs at least two samples");
    auto d = sample_derivatives(gamma);

    double modulus = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) modulus = std::max(modulus, norm(d[i + 1] - d[i]));
    if (modulus >= eps)
        throw ResolutionError("derivative moves by " + std::to_string(modulus) +
                              " between samples, too coarse to certify deviations below " + std::to_string(eps));

    SlopePartition out;
    out.breakpoints.push_back(gamma.t.front());
    std::size_t i = 0;
    while (i + 1 < n) {
        std::size_t last = i;
        PieceCheck best;
        for (std::size_t j = i + 1; j < n; ++j) {
            double len = gamma.t[j] - gamma.t[i];
            Vec w = (gamma.x[j] - gamma.x[i]) / len;
            double slope = norm(w);
            if (!(slope > s)) break;
            double dev = 0.0;
            for (std::size_t k = i; k <= j; ++k) dev = std::max(dev, norm(d[k] - w));
            if (!(dev < eps)) break;
            last = j;
            best = {slope, dev, w};
        }
        if (last == i)
            throw ResolutionError("a single sample step at t = " + std::to_string(gamma.t[i]) +
                                  " already violates the slope or deviation bound");
        out.breakpoints.push_back(gamma.t[last]);
        out.slopes.push_back(best.slope);
        out.deviations.push_back(best.deviation);
        out.chord_velocities.push_back(best.w);
        i = last;
    }

    std::size_t k = 0;
    for (std::size_t p = 0; p + 1 < out.breakpoints.size(); ++p) {
        std::size_t a = k;
        while (gamma.t[k] != out.breakpoints[p + 1]) ++k;
        auto pc = check_piece(gamma, d, a, k, norm);
        if (!(pc.slope > s && pc.deviation < eps))
            throw ContractViolation("slope partition piece " + std::to_string(p) + " failed re-verification");
    }
    return out;
}

std::string to_string(EstimateOutcome o)
{
    switch (o) {
    case EstimateOutcome::Holds: return "holds";
    case EstimateOutcome::Fails: return "fails";
    case EstimateOutcome::Vacuous: return "vacuous";
    case EstimateOutcome::VacuousStrict: return "vacuous-strict";
    }
    return "?";
}

double sampled_lipschitz(const std::vector<Vec>& pts, const VecMap& f, const Norm& norm, std::size_t subset)
{
    const std::size_t n = pts.size();
    std::vector<Vec> fx;
    fx.reserve(n);
    for (const auto& p : pts) fx.push_back(f(p));
    double worst = 0.0;
    auto ratio = [&](std::size_t i, std::size_t j) {
        double d = norm(pts[i] - pts[j]);
        if (d > 0.0) worst = std::max(worst, norm(fx[i] - fx[j]) / d);
    };
    for (std::size_t i = 0; i + 1 < n; ++i) ratio(i, i + 1);
    std::size_t stride = std::max<std::size_t>(1, n / std::max<std::size_t>(subset, 1));
    for (std::size_t i = 0; i < n; i += stride)
        for (std::size_t j = i + stride; j < n; j += stride) ratio(i, j);
    return worst;
}

RectEstimate rect_estimate_check(const SampledCurve& gamma, const VecMap& f, const std::optional<Vec>& phi,
                                 const Norm& norm)
{
    const std::size_t n = gamma.size();
    if (n < 2) throw InputError("a sampled curve needs at least two samples");
    double lip = sampled_lipschitz(gamma.x, f, norm);
    if (lip > 1.0 + 1e-12) throw InputError("f is not 1-Lipschitz on the samples (ratio " + std::to_string(lip) + ")");

    std::vector<Vec> fx;
    fx.reserve(n);
    RectEstimate r;
    for (const auto& p : gamma.x) {
        fx.push_back(f(p));
        r.eps = std::max(r.eps, norm(fx.back() - p));
    }
    double len = gamma.b() - gamma.a();
    Vec u = (gamma.x.back() - gamma.x.front()) / len;
    r.chord_norm = norm(u);
    r.A = 1.0 - r.chord_norm + 2.0 * r.eps / len;
    if (r.A > 1.0 || r.chord_norm == 0.0) {
        r.outcome = EstimateOutcome::Vacuous;
        return r;
    }
    r.threshold = 1.0 - std::sqrt(std::max(r.A, 0.0));

    Vec functional;
    if (phi) {
        functional = *phi;
        if (std::abs(norm.dual(functional) - 1.0) > 1e-9 || std::abs(functional.dot(u) - r.chord_norm) > 1e-9)
            throw InputError("phi must have dual norm one and norm the chord");
    } else {
        functional = norm.norming_functional(u);
    }

    double good = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        double h = gamma.t[i + 1] - gamma.t[i];
        Vec v = (fx[i + 1] - fx[i]) / h;
        if (functional.dot(v) > r.threshold) good += h;
    }
    r.fraction = good / len;
    if (r.A <= 1e-12)
        r.outcome = EstimateOutcome::VacuousStrict;
    else
        r.outcome = r.fraction >= r.threshold ? EstimateOutcome::Holds : EstimateOutcome::Fails;
    return r;
}

StabilityReport stability_experiment(const SampledCurve& gamma, const VecMap& f, double delta, const Norm& norm)
{
    if (!(delta > 0.0)) throw InputError("delta must be positive");
    const std::size_t n = gamma.size();
    if (n < 2) throw InputError("a sampled curve needs at least two samples");
    StabilityReport rep;
    rep.delta = delta;
    rep.guaranteed = norm.strictly_convex();
    rep.lipschitz = sampled_lipschitz(gamma.x, f, norm);
    if (rep.lipschitz > 1.0 + 1e-12)
        throw InputError("f is not 1-Lipschitz on the samples (ratio " + std::to_string(rep.lipschitz) + ")");

    std::vector<Vec> fx;
    fx.reserve(n);
    for (const auto& p : gamma.x) {
        fx.push_back(f(p));
        rep.eps = std::max(rep.eps, norm(fx.back() - p));
    }
    double bad = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        double h = gamma.t[i + 1] - gamma.t[i];
        Vec dg = (gamma.x[i + 1] - gamma.x[i]) / h;
        Vec dfg = (fx[i + 1] - fx[i]) / h;
        if (norm(dfg - dg) >= delta) bad += h;
    }
    rep.deviation_fraction = bad / (gamma.b() - gamma.a());
    rep.bound_holds = rep.deviation_fraction <= delta;
    return rep;
}

PerturbationFamily radial_family(const Vec& center, double rho)
{
    if (!(rho > 0.0)) throw InputError("radius must be positive");
    return [center, rho](double eps) -> VecMap {
        if (!(eps >= 0.0 && eps < rho)) throw ParameterError("radial perturbation needs 0 <= eps < radius");
        double target = rho - eps;
        return [center, target](const Vec& p) -> Vec {
            Vec d = p - center;
            double n = d.norm();
            if (n <= target) return p;
            return center + d * (target / n);
        };
    };
}

Vec project_to_convex_polygon(const std::vector<Vec>& v, const Vec& p)
{
    const std::size_t n = v.size();
    bool inside = true;
    for (std::size_t i = 0; i < n && inside; ++i) {
        const Vec& a = v[i];
        const Vec& b = v[(i + 1) % n];
        double cross = (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0]);
        if (cross < 0.0) inside = false;
    }
    if (inside) return p;
    Vec best = v[0];
    double best_d = INFINITY;
    for (std::size_t i = 0; i < n; ++i) {
        const Vec& a = v[i];
        const Vec& b = v[(i + 1) % n];
        Vec ab = b - a;
        double t = std::clamp((p - a).dot(ab) / ab.squaredNorm(), 0.0, 1.0);
        Vec q = a + t * ab;
        double d = (p - q).squaredNorm();
        if (d < best_d) {
            best_d = d;
            best = q;
        }
    }
    return best;
}

PerturbationFamily polygon_family(const Vec& center, double rho)
{
    if (!(rho > 0.0)) throw InputError("radius must be positive");
    return [center, rho](double eps) -> VecMap {
        if (!(eps > 0.0)) throw ParameterError("polygon perturbation needs eps > 0");
        int n = 3;
        while (rho * (1.0 - std::cos(std::numbers::pi / n)) > eps) {
            if (n > (1 << 24)) throw ParameterError("eps too small for the polygon family");
            n *= 2;
        }
        // Refine the doubling overshoot down to the least admissible n.
        int lo = std::max(3, n / 2), hi = n;
        while (lo < hi) {
            int mid = lo + (hi - lo) / 2;
            if (rho * (1.0 - std::cos(std::numbers::pi / mid)) <= eps)
                hi = mid;
            else
                lo = mid + 1;
        }
        std::vector<Vec> verts;
        verts.reserve(hi);
        for (int k = 0; k < hi; ++k) {
            double a = 2.0 * std::numbers::pi * k / hi;
            verts.push_back(center + rho * vec2(std::cos(a), std::sin(a)));
        }
        return [verts](const Vec& p) -> Vec { return project_to_convex_polygon(verts, p); };
    };
}

std::optional<double> SweepResult::found_eps() const
{
    if (!first_holding) return std::nullopt;
    return rows[*first_holding].eps;
}

SweepResult stability_sweep(const SampledCurve& gamma, const PerturbationFamily& family, double delta, double eps0,
                            int steps, const Norm& norm)
{
    if (steps < 1) throw InputError("sweep needs at least one step");
    SweepResult out;
    double eps = eps0;
    for (int j = 0; j < steps; ++j, eps *= 0.5) {
        out.rows.push_back(stability_experiment(gamma, family(eps), delta, norm));
        if (!out.first_holding && out.rows.back().bound_holds) out.first_holding = out.rows.size() - 1;
    }
    if (out.first_holding) {
        out.tail_nonincreasing = true;
        for (std::size_t j = *out.first_holding + 1; j < out.rows.size(); ++j)
            if (out.rows[j].deviation_fraction > out.rows[j - 1].deviation_fraction) out.tail_nonincreasing = false;
    }
    return out;
}

SampledCurve sawtooth_base(int teeth, int samples_per_half_tooth)
{
    if (teeth < 1 || samples_per_half_tooth < 1) throw InputError("teeth and samples must be positive");
    std::size_t steps = static_cast<std::size_t>(2) * teeth * samples_per_half_tooth;
    SampledCurve c;
    for (std::size_t i = 0; i <= steps; ++i) {
        double t = static_cast<double>(i) / static_cast<double>(steps);
        c.t.push_back(t);
        c.x.push_back(vec2(t, 0.0));
    }
    return c;
}

VecMap sawtooth_map(int teeth)
{
    if (teeth < 1) throw InputError("teeth must be positive");
    double n = teeth;
    return [n](const Vec& p) -> Vec {
        double s = p[0] * n;
        return vec2(p[0], std::abs(s - std::round(s)) / n);
    };
}

SawtoothRow sawtooth_demo(int teeth, double delta, int samples_per_half_tooth)
{
    auto rep = stability_experiment(sawtooth_base(teeth, samples_per_half_tooth), sawtooth_map(teeth), delta,
                                    Norm::sup());
    return {teeth, rep.eps, rep.deviation_fraction, rep.bound_holds};
}

}  // namespace lipsquash

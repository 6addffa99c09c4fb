#include "lipsquash/realline.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace lipsquash {

namespace {

long long floor_div(long long a, long long b)
{
    long long q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

}  // namespace

SquashProfile::SquashProfile(double R, int N, double t0, double lambda)
    : R_(R), N_(N), t0_(t0), lambda_(lambda), base_(t0), shift_(0)
{
    if (!(R > 0.0) || !std::isfinite(R)) throw InputError("period R must be positive");
    if (N < 1) throw InputError("density height N must be at least 1");
    if (!std::isfinite(t0)) throw InputError("phase t0 must be finite");
    if (!(lambda > 0.0 && lambda <= 1.0)) throw InputError("lambda must lie in (0,1]");
}

SquashProfile SquashProfile::lattice(double R, int N, int shift, double lambda)
{
    if (N < 1 || shift < 0 || shift >= N) throw InputError("lattice shift must lie in [0, N)");
    SquashProfile p(R, N, 0.0, lambda);
    p.shift_ = shift;
    p.t0_ = shift * R / N;
    return p;
}

SquashProfile SquashProfile::with_lambda(double lambda) const
{
    SquashProfile p = *this;
    if (!(lambda > 0.0 && lambda <= 1.0)) throw InputError("lambda must lie in (0,1]");
    p.lambda_ = lambda;
    return p;
}

SquashProfile::Local SquashProfile::locate(double t) const
{
    double w = N_ * ((t - base_) / R_);
    double m = std::floor(w);
    auto j = static_cast<long long>(m) - shift_;
    long long k = floor_div(j, N_);
    return {k, j - k * N_ == 0, w - m};
}

bool SquashProfile::in_I(double t) const
{
    return locate(t).in_I;
}

long long SquashProfile::period(double t) const
{
    return locate(t).k;
}

double SquashProfile::phi(double t) const
{
    return in_I(t) ? static_cast<double>(N_) : 0.0;
}

double SquashProfile::g(double t) const
{
    Local loc = locate(t);
    double next = static_cast<double>(loc.k + 1) * R_;
    if (!loc.in_I) return next;
    return std::min((static_cast<double>(loc.k) + loc.frac) * R_, next);
}

double phi_eval(const SquashProfile& p, double t)
{
    return p.phi(t);
}

double g_eval(const SquashProfile& p, double t)
{
    return p.g(t);
}

std::vector<double> shift_masses(const DiscreteMeasure& mu, double R, int N)
{
    if (mu.dim() != 1) throw InputError("shift selection needs a measure on the line");
    if (N < 2) throw InputError("N must be at least 2");
    std::vector<double> masses(static_cast<std::size_t>(N), 0.0);
    for (int i = 0; i < N; ++i) {
        SquashProfile p = SquashProfile::lattice(R, N, i);
        for (std::size_t a = 0; a < mu.size(); ++a)
            if (p.in_I(mu.point(a)[0])) masses[static_cast<std::size_t>(i)] += mu.weight(a);
    }
    return masses;
}

int choose_shift(const DiscreteMeasure& mu, double R, int N)
{
    auto masses = shift_masses(mu, R, N);
    return static_cast<int>(std::min_element(masses.begin(), masses.end()) - masses.begin());
}

double choose_t0(const DiscreteMeasure& mu, double R, int N)
{
    return choose_shift(mu, R, N) * R / N;
}

double covered_mass(const DiscreteMeasure& mu, const SquashProfile& p)
{
    double m = 0.0;
    for (std::size_t a = 0; a < mu.size(); ++a)
        if (p.in_I(mu.point(a)[0])) m += mu.weight(a);
    return m;
}

double sup_distance_bound(const SquashProfile& p, double D, std::size_t grid)
{
    if (!(D >= 0.0)) throw InputError("D must be nonnegative");
    const double bound = std::abs(p.t0()) + p.R();
    const std::size_t n = std::max<std::size_t>(grid, 2);
    for (std::size_t i = 0; i < n; ++i) {
        double t = -D + 2.0 * D * static_cast<double>(i) / static_cast<double>(n - 1);
        double dev = std::abs(p.g(t) - t);
        if (dev > bound)
            throw ContractViolation("|g(t) - t| = " + std::to_string(dev) + " exceeds |t0| + R at t = " +
                                    std::to_string(t));
    }
    double dev0 = std::abs(p.g(p.t0()) - p.t0());
    if (dev0 > bound) throw ContractViolation("|g(t0) - t0| exceeds |t0| + R");
    return bound;
}

double large_scale_formula(double R, double gap)
{
    double n = std::max(std::floor(gap / R), 2.0);
    return (n + 1.0) / (n - 1.0);
}

double large_scale_ratio_bound(const SquashProfile& p, double s, double t)
{
    double gap = std::abs(s - t);
    if (gap < 2.0 * p.R())
        throw PreconditionError("large-scale bound needs |s - t| >= 2R");
    double bound = large_scale_formula(p.R(), gap);
    double ratio = std::abs(p.g(s) - p.g(t)) / gap;
    if (ratio > bound)
        throw ContractViolation("large-scale ratio " + std::to_string(ratio) + " exceeds bound " +
                                std::to_string(bound));
    return bound;
}

double SquashResult::operator()(double t) const
{
    if (t < -params.D || t > params.D) throw DomainError("h is defined on [-D, D] only");
    return profile.h(t);
}

int squash_height(double eta)
{
    if (!(eta > 0.0 && eta < 1.0)) throw ParameterError("eta must lie in (0,1); N >= 2 is required");
    double n = std::ceil(1.0 / eta - 1e-12);
    return std::max(2, static_cast<int>(n));
}

double post_scale(double eps, double D)
{
    return 1.0 - eps / (2.0 * std::max(1.0, D));
}

double select_period(double eps, double r, double lambda)
{
    double R = eps / 8.0;
    const double target = (1.0 / lambda) * (1.0 - 1e-9);
    for (int it = 0; it < 200; ++it) {
        double n = std::floor(r / R);
        if (n >= 2.0 && (n + 1.0) / (n - 1.0) < target) return R;
        R *= 0.5;
    }
    throw ParameterError("no period R found for eps = " + std::to_string(eps) + ", r = " + std::to_string(r));
}

SquashResult build_h(const DiscreteMeasure& mu, double eta, double r, double eps, double D,
                     const BuildOptions& opts)
{
    if (mu.dim() != 1) throw InputError("build_h needs a measure on the line");
    if (!(eps > 0.0)) throw ParameterError("eps must be positive");
    if (!(r > 0.0)) throw ParameterError("r must be positive");
    if (!(D > 0.0)) throw ParameterError("D must be positive");
    const int N = squash_height(eta);
    if (mu.empty() || std::abs(mu.total_mass() - 1.0) > 1e-9)
        throw PreconditionError("build_h needs a probability measure");
    for (std::size_t a = 0; a < mu.size(); ++a)
        if (std::abs(mu.point(a)[0]) > D) throw DomainError("support leaves [-D, D]");

    const double lambda = post_scale(eps, D);
    const double R = select_period(eps, r, lambda);
    const int shift = choose_shift(mu, R, N);

    SquashResult res;
    res.profile = SquashProfile::lattice(R, N, shift, lambda);
    res.params = {eta, eps, r, D, N};
    res.degenerate = r >= 2.0 * D;
    const SquashProfile& p = res.profile;

    std::vector<double> h_atoms(mu.size());
    for (std::size_t a = 0; a < mu.size(); ++a) {
        double t = mu.point(a)[0];
        h_atoms[a] = p.h(t);
        if (!p.in_I(t)) res.concentrated_image.push_back(h_atoms[a]);
    }
    auto& img = res.concentrated_image;
    std::sort(img.begin(), img.end());
    img.erase(std::unique(img.begin(), img.end()), img.end());
    for (std::size_t a = 0; a < mu.size(); ++a)
        if (std::binary_search(img.begin(), img.end(), h_atoms[a])) res.E.push_back(a);

    // Verification on the grid together with the atoms.
    std::vector<double> ts;
    const std::size_t n = std::max<std::size_t>(opts.grid, 2);
    ts.reserve(n + mu.size());
    for (std::size_t i = 0; i < n; ++i)
        ts.push_back(-D + 2.0 * D * static_cast<double>(i) / static_cast<double>(n - 1));
    for (std::size_t a = 0; a < mu.size(); ++a) ts.push_back(mu.point(a)[0]);
    std::sort(ts.begin(), ts.end());
    std::vector<double> hs(ts.size());
    for (std::size_t i = 0; i < ts.size(); ++i) hs[i] = p.h(ts[i]);

    SquashChecks& c = res.checks;
    for (std::size_t i = 0; i < ts.size(); ++i) c.sup_deviation = std::max(c.sup_deviation, std::abs(hs[i] - ts[i]));
    c.sup_ok = c.sup_deviation < eps;

    c.lipschitz_ok = true;
    // Samples a few ulps apart see the rounding of the profile, not its slope.
    const double slack = 1e-12 * std::max(1.0, D);
    auto lip_pair = [&](double s, double hs_, double t, double ht) {
        double dt = std::abs(s - t);
        double dh = std::abs(hs_ - ht);
        if (dt > 1e-9) c.max_lipschitz_ratio = std::max(c.max_lipschitz_ratio, dh / dt);
        if (dh > N * dt + slack) c.lipschitz_ok = false;
    };
    for (std::size_t i = 0; i + 1 < ts.size(); ++i) lip_pair(ts[i], hs[i], ts[i + 1], hs[i + 1]);
    for (std::size_t a = 0; a < mu.size(); ++a)
        for (std::size_t b = a + 1; b < mu.size(); ++b)
            lip_pair(mu.point(a)[0], h_atoms[a], mu.point(b)[0], h_atoms[b]);

    c.far_ok = true;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        auto first = std::lower_bound(ts.begin() + static_cast<std::ptrdiff_t>(i), ts.end(), ts[i] + r);
        for (auto j = static_cast<std::size_t>(first - ts.begin()); j < ts.size(); ++j) {
            double dt = ts[j] - ts[i];
            if (dt < r) continue;
            double dh = std::abs(hs[j] - hs[i]);
            c.max_far_ratio = std::max(c.max_far_ratio, dh / dt);
            if (dh > dt) c.far_ok = false;
        }
    }

    c.E_mass = mu.mass_of(res.E);
    c.mass_ok = c.E_mass >= 1.0 - eta - 1e-12;
    c.image_size = img.size();
    c.image_bound = static_cast<std::size_t>(std::ceil(2.0 * D / R)) + 2;
    c.image_ok = c.image_size <= c.image_bound;

    if (!c.sup_ok) throw ContractViolation("build_h: sup deviation " + std::to_string(c.sup_deviation) + " >= eps");
    if (!c.lipschitz_ok) throw ContractViolation("build_h: h is not N-Lipschitz");
    if (!c.far_ok) throw ContractViolation("build_h: h expands a pair at distance >= r");
    if (!c.mass_ok) throw ContractViolation("build_h: mu(E) = " + std::to_string(c.E_mass) + " < 1 - eta");
    if (!c.image_ok) throw ContractViolation("build_h: concentrated image too large");
    return res;
}

}  // namespace lipsquash

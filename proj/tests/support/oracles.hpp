#pragma once

// Independent reference computations and seeded generators for the test suites.
// Nothing here calls into the library code it is used to check.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace oracle {

using Vec = Eigen::VectorXd;

inline Vec v2(double x, double y)
{
    Vec v(2);
    v << x, y;
    return v;
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}
    double uniform(double a = 0.0, double b = 1.0) { return std::uniform_real_distribution<double>(a, b)(gen_); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen_); }
    bool coin(double p = 0.5) { return uniform() < p; }
    Vec point(int dim, double a = 0.0, double b = 1.0)
    {
        Vec v(dim);
        for (int i = 0; i < dim; ++i) v[i] = uniform(a, b);
        return v;
    }
    std::mt19937_64& engine() { return gen_; }

private:
    std::mt19937_64 gen_;
};

// Runs prop on `trials` generated cases; returns the first failing description, empty on success.
template <class Case>
std::string for_all(std::uint64_t seed, int trials, const std::function<Case(Rng&)>& gen,
                    const std::function<bool(const Case&, std::string&)>& prop)
{
    Rng rng(seed);
    for (int i = 0; i < trials; ++i) {
        Case c = gen(rng);
        std::string why;
        if (!prop(c, why)) {
            std::ostringstream os;
            os << "seed " << seed << " trial " << i << ": " << why;
            return os.str();
        }
    }
    return {};
}

// Exact Hausdorff s-content of a tiny point set: the minimum over set partitions of
// the sum of diameters to the power s (0^0 counts as 1 only for a nonempty part of positive size).
inline double brute_content(const std::vector<Vec>& pts, double s)
{
    const std::size_t n = pts.size();
    if (n == 0) return 0.0;
    std::vector<double> diam(1u << n, 0.0);
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
        double d = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            if (mask & (1u << i))
                for (std::size_t j = i + 1; j < n; ++j)
                    if (mask & (1u << j)) d = std::max(d, (pts[i] - pts[j]).norm());
        diam[mask] = d;
    }
    auto cost = [&](std::uint32_t mask) {
        double d = diam[mask];
        if (d == 0.0) return s == 0.0 ? 1.0 : 0.0;
        return std::pow(d, s);
    };
    std::vector<double> best(1u << n, std::numeric_limits<double>::infinity());
    best[0] = 0.0;
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
        std::uint32_t low = mask & (~mask + 1);
        for (std::uint32_t sub = mask; sub; sub = (sub - 1) & mask)
            if (sub & low) best[mask] = std::min(best[mask], best[mask ^ sub] + cost(sub));
    }
    return best[(1u << n) - 1];
}

// Integral from t0 to t of the profile density, by explicit interval overlaps.
inline double profile_integral(double R, int N, double t0, double t)
{
    double a = std::min(t0, t), b = std::max(t0, t);
    long long k0 = static_cast<long long>(std::floor((a - t0) / R)) - 1;
    long long k1 = static_cast<long long>(std::floor((b - t0) / R)) + 1;
    double total = 0.0;
    for (long long k = k0; k <= k1; ++k) {
        double lo = t0 + k * R, hi = lo + R / N;
        total += std::max(0.0, std::min(hi, b) - std::max(lo, a)) * N;
    }
    return t >= t0 ? total : -total;
}

// Length of {u in [0,1] : p0 + u (p1 - p0) lies in the box} by dense midpoint sampling.
inline double sampled_fraction_in_box(const Vec& p0, const Vec& p1, const Vec& lo, const Vec& hi, int samples)
{
    int in = 0;
    for (int i = 0; i < samples; ++i) {
        double u = (i + 0.5) / samples;
        Vec p = p0 + u * (p1 - p0);
        bool inside = true;
        for (Eigen::Index k = 0; k < p.size(); ++k)
            if (p[k] < lo[k] || p[k] > hi[k]) inside = false;
        in += inside;
    }
    return static_cast<double>(in) / samples;
}

// Distance from a point to a polyline given by its vertices.
inline double point_polyline_distance(const Vec& p, const std::vector<Vec>& pl)
{
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < pl.size(); ++i) {
        Vec ab = pl[i + 1] - pl[i];
        double L2 = ab.squaredNorm();
        double u = L2 > 0.0 ? std::clamp((p - pl[i]).dot(ab) / L2, 0.0, 1.0) : 0.0;
        best = std::min(best, (p - (pl[i] + u * ab)).norm());
    }
    if (pl.size() == 1) best = (p - pl[0]).norm();
    return best;
}

// Max over pairs of |f(x)-f(y)| / |x-y|, all pairs.
inline double pair_lipschitz(const std::vector<Vec>& x, const std::vector<Vec>& fx)
{
    double worst = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = i + 1; j < x.size(); ++j) {
            double d = (x[i] - x[j]).norm();
            if (d > 0.0) worst = std::max(worst, (fx[i] - fx[j]).norm() / d);
        }
    return worst;
}

// Chord-over-arc ratio of a circular arc of angle a.
inline double chord_arc(double a)
{
    return a == 0.0 ? 1.0 : std::sin(a / 2.0) / (a / 2.0);
}

// Largest arc angle whose chord-over-arc ratio exceeds s, by bisection.
inline double max_arc_angle(double s)
{
    double lo = 0.0, hi = 2.0 * M_PI;
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        (chord_arc(mid) > s ? lo : hi) = mid;
    }
    return lo;
}

}  // namespace oracle

#include "lipsquash/measure.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace lipsquash {

namespace {

constexpr double kGrid = 1e12;

std::vector<double> key_of(const Vec& p)
{
    std::vector<double> k(static_cast<std::size_t>(p.size()));
    for (Eigen::Index i = 0; i < p.size(); ++i) {
        double x = p[i];
        double r = std::nearbyint(x * kGrid) / kGrid;
        // Past ~1e3 the grid is finer than double spacing; keep the value.
        k[static_cast<std::size_t>(i)] = std::isfinite(r) && std::abs(x) < 1e3 ? r : x;
        if (k[static_cast<std::size_t>(i)] == 0.0) k[static_cast<std::size_t>(i)] = 0.0;
    }
    return k;
}

}  // namespace

Vec canonical_point(const Vec& p)
{
    auto k = key_of(p);
    return Eigen::Map<const Vec>(k.data(), static_cast<Eigen::Index>(k.size()));
}

DiscreteMeasure::DiscreteMeasure(int dim) : dim_(dim)
{
    if (dim < 1) throw InputError("measure dimension must be positive");
}

DiscreteMeasure::DiscreteMeasure(int dim, const std::vector<Vec>& points, const std::vector<double>& weights)
    : DiscreteMeasure(dim)
{
    if (points.size() != weights.size())
        throw InputError("points and weights differ in length");
    for (std::size_t i = 0; i < points.size(); ++i) add(points[i], weights[i]);
}

DiscreteMeasure DiscreteMeasure::on_line(const std::vector<double>& points, const std::vector<double>& weights)
{
    if (points.size() != weights.size())
        throw InputError("points and weights differ in length");
    DiscreteMeasure m(1);
    for (std::size_t i = 0; i < points.size(); ++i) m.add(vec1(points[i]), weights[i]);
    return m;
}

DiscreteMeasure DiscreteMeasure::uniform(int dim, const std::vector<Vec>& points)
{
    DiscreteMeasure m(dim);
    if (points.empty()) return m;
    double w = 1.0 / static_cast<double>(points.size());
    for (const auto& p : points) m.add(p, w);
    return m;
}

void DiscreteMeasure::add(const Vec& p, double w)
{
    if (p.size() != dim_)
        throw InputError("point of dimension " + std::to_string(p.size()) + " in a measure of dimension " +
                         std::to_string(dim_));
    if (!std::isfinite(w) || w < 0.0) throw InputError("weights must be finite and nonnegative");
    for (Eigen::Index i = 0; i < p.size(); ++i)
        if (!std::isfinite(p[i])) throw InputError("non-finite coordinate");
    auto key = key_of(p);
    auto it = index_.find(key);
    if (it != index_.end()) {
        weights_[it->second] += w;
        return;
    }
    index_.emplace(key, points_.size());
    points_.push_back(Eigen::Map<const Vec>(key.data(), static_cast<Eigen::Index>(key.size())));
    weights_.push_back(w);
}

double DiscreteMeasure::total_mass() const
{
    return std::accumulate(weights_.begin(), weights_.end(), 0.0);
}

std::optional<std::size_t> DiscreteMeasure::find(const Vec& p) const
{
    if (p.size() != dim_) return std::nullopt;
    auto it = index_.find(key_of(p));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

double DiscreteMeasure::mass_of(const std::vector<std::size_t>& atoms) const
{
    double m = 0.0;
    for (auto i : atoms) m += weights_.at(i);
    return m;
}

DiscreteMeasure DiscreteMeasure::normalized() const
{
    double total = total_mass();
    if (!(total > 0.0)) throw DomainError("cannot normalize a measure of zero mass");
    DiscreteMeasure m = *this;
    for (auto& w : m.weights_) w /= total;
    return m;
}

DiscreteMeasure DiscreteMeasure::restricted(const std::vector<std::size_t>& atoms) const
{
    DiscreteMeasure m(dim_);
    for (auto i : atoms) m.add(points_.at(i), weights_.at(i));
    return m;
}

std::vector<double> DiscreteMeasure::line_points() const
{
    if (dim_ != 1) throw DomainError("line_points on a measure of dimension " + std::to_string(dim_));
    std::vector<double> out;
    out.reserve(points_.size());
    for (const auto& p : points_) out.push_back(p[0]);
    return out;
}

DiscreteMeasure pushforward(const DiscreteMeasure& mu, const VecMap& f)
{
    std::vector<Vec> images;
    images.reserve(mu.size());
    for (std::size_t i = 0; i < mu.size(); ++i) {
        Vec y;
        try {
            y = f(mu.point(i));
        } catch (const std::exception& e) {
            throw InputError("evaluator failed at support point " + std::to_string(i) + ": " + e.what());
        }
        if (y.size() == 0 || !y.allFinite())
            throw InputError("evaluator returned an invalid value at support point " + std::to_string(i));
        if (!images.empty() && y.size() != images.front().size())
            throw InputError("evaluator changed output dimension at support point " + std::to_string(i));
        images.push_back(std::move(y));
    }
    int dim = images.empty() ? mu.dim() : static_cast<int>(images.front().size());
    DiscreteMeasure out(dim);
    for (std::size_t i = 0; i < images.size(); ++i) out.add(images[i], mu.weight(i));
    return out;
}

DiscreteMeasure pushforward_line(const DiscreteMeasure& mu, const ScalarMap& f)
{
    if (mu.empty()) return DiscreteMeasure(1);
    return pushforward(mu, [&f](const Vec& x) { return vec1(f(x)); });
}

AveragingResult averaging_bound(const std::vector<std::pair<double, double>>& xi, double A)
{
    if (!(A >= 0.0 && A <= 1.0)) throw InputError("A must lie in [0,1]");
    AveragingResult res;
    double total = 0.0;
    for (const auto& [value, w] : xi) {
        if (!std::isfinite(value) || !std::isfinite(w) || w < 0.0)
            throw InputError("averaging input needs finite values and nonnegative weights");
        total += w;
    }
    if (std::abs(total - 1.0) > 1e-9) throw InputError("weights must sum to 1");

    res.threshold = 1.0 - std::sqrt(A);
    double mean = 0.0;
    double above = 0.0;
    double max_value = -INFINITY;
    for (const auto& [value, w] : xi) {
        mean += value * w;
        if (value > res.threshold) above += w;
        max_value = std::max(max_value, value);
    }
    res.mean = mean;
    res.threshold_mass = above;

    if (max_value > 1.0 + 1e-12) {
        res.reason = "values exceed 1";
        return res;
    }
    if (mean < 1.0 - A) {
        res.reason = "weighted mean " + std::to_string(mean) + " below 1 - A";
        return res;
    }
    res.precondition_ok = true;
    if (A == 0.0) {
        res.vacuous_strict = true;
        res.reason = "A = 0: the strict conclusion is empty";
        return res;
    }
    res.holds = above >= res.threshold;
    return res;
}

AcWithErrorResult ac_with_error(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                const DiscreteMeasure& nu_tilde, double alpha)
{
    if (!(alpha > 0.0)) throw InputError("alpha must be positive");
    if (mu.dim() != nu.dim() || nu_tilde.dim() != nu.dim())
        throw InputError("measures live in different dimensions");

    const std::size_t n = nu.size();
    std::vector<double> mu_w(n, 0.0);
    std::vector<double> tilde_w(n, 0.0);
    for (std::size_t i = 0; i < mu.size(); ++i) {
        if (mu.weight(i) == 0.0) continue;
        auto j = nu.find(mu.point(i));
        if (!j || nu.weight(*j) == 0.0)
            throw DomainError("mu has an atom of positive mass outside the support of nu (atom " +
                              std::to_string(i) + ")");
        mu_w[*j] = mu.weight(i);
    }
    for (std::size_t i = 0; i < nu_tilde.size(); ++i) {
        if (nu_tilde.weight(i) == 0.0) continue;
        auto j = nu.find(nu_tilde.point(i));
        if (!j) throw DomainError("nu_tilde has an atom outside the support of nu");
        if (nu_tilde.weight(i) > nu.weight(*j) * (1.0 + 1e-12))
            throw DomainError("nu_tilde exceeds nu at atom " + std::to_string(*j));
        tilde_w[*j] = std::min(nu_tilde.weight(i), nu.weight(*j));
    }

    AcWithErrorResult res;
    double nu_total = nu.total_mass();
    for (std::size_t j = 0; j < n; ++j) res.deficit += nu.weight(j) - tilde_w[j];

    // Smallest nu-mass a fractional set can have while its mu-mass exceeds alpha:
    // atoms sorted by density g = dmu/dnu, heaviest first.
    std::vector<std::size_t> order;
    for (std::size_t j = 0; j < n; ++j)
        if (nu.weight(j) > 0.0) order.push_back(j);
    auto g = [&](std::size_t j) { return mu_w[j] / nu.weight(j); };
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return g(a) > g(b); });

    double g_max = order.empty() ? 0.0 : g(order.front());
    res.epsilon_generic = g_max > 0.0 && nu_total > 0.0 ? std::pow(alpha / g_max, 2) / nu_total : nu_total;

    double mu_acc = 0.0;
    double nu_acc = 0.0;
    double eps = nu_total;
    for (auto j : order) {
        if (mu_acc + mu_w[j] > alpha) {
            eps = nu_acc + (alpha - mu_acc) / g(j);
            break;
        }
        mu_acc += mu_w[j];
        nu_acc += nu.weight(j);
    }
    res.epsilon_used = eps;

    if (res.deficit > eps) {
        res.reason = "deficit " + std::to_string(res.deficit) + " exceeds admissible epsilon " + std::to_string(eps);
        return res;
    }

    for (std::size_t j = 0; j < n; ++j) {
        if (tilde_w[j] > 0.0)
            res.E.push_back(j);
        else
            res.mu_outside += mu_w[j];
    }
    if (res.mu_outside > alpha * (1.0 + 1e-12))
        throw ContractViolation("ac_with_error: mu outside E is " + std::to_string(res.mu_outside) +
                                " > alpha");
    res.claimed = true;
    return res;
}

}  // namespace lipsquash

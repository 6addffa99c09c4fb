#include "lipsquash/cones.hpp"

#include <cmath>
#include <iostream>
#include <mutex>

namespace lipsquash {

namespace {

std::mutex warn_mutex;
std::function<void(const std::string&)> warn_handler = [](const std::string& msg) {
    std::cerr << "lipsquash: warning: " << msg << '\n';
};

double golden_min(const std::function<double(double)>& f, double lo, double hi)
{
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - g * (b - a), d = a + g * (b - a);
    double fc = f(c), fd = f(d);
    for (int it = 0; it < 200 && b - a > 1e-16 * std::max(1.0, std::abs(a) + std::abs(b)); ++it) {
        if (fc <= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    return std::min({fc, fd, f(lo), f(hi)});
}

}  // namespace

void set_warning_handler(std::function<void(const std::string&)> handler)
{
    std::lock_guard lock(warn_mutex);
    warn_handler = std::move(handler);
}

void warn(const std::string& msg)
{
    std::lock_guard lock(warn_mutex);
    if (warn_handler) warn_handler(msg);
}

Norm Norm::p(double p)
{
    if (!(p >= 1.0)) throw InputError("p-norm needs p >= 1");
    if (std::isinf(p)) return sup();
    if (p == 2.0) return euclidean();
    return Norm(Kind::P, p);
}

std::string Norm::name() const
{
    switch (kind_) {
    case Kind::Euclidean: return "euclidean";
    case Kind::Sup: return "sup";
    case Kind::P: return "p=" + std::to_string(p_);
    }
    return "?";
}

double Norm::operator()(const Vec& v) const
{
    switch (kind_) {
    case Kind::Euclidean: return v.norm();
    case Kind::Sup: return v.lpNorm<Eigen::Infinity>();
    case Kind::P: {
        if (p_ == 1.0) return v.lpNorm<1>();
        double m = v.lpNorm<Eigen::Infinity>();
        if (m == 0.0) return 0.0;
        return m * std::pow((v / m).array().abs().pow(p_).sum(), 1.0 / p_);
    }
    }
    return 0.0;
}

double Norm::dual(const Vec& u) const
{
    switch (kind_) {
    case Kind::Euclidean: return u.norm();
    case Kind::Sup: return u.lpNorm<1>();
    case Kind::P: {
        if (p_ == 1.0) return u.lpNorm<Eigen::Infinity>();
        return Norm::p(p_ / (p_ - 1.0))(u);
    }
    }
    return 0.0;
}

bool Norm::strictly_convex() const
{
    return kind_ == Kind::Euclidean || (kind_ == Kind::P && p_ > 1.0);
}

Vec Norm::norming_functional(const Vec& u) const
{
    double n = (*this)(u);
    if (!(n > 0.0)) throw DomainError("norming functional of the zero vector");
    switch (kind_) {
    case Kind::Euclidean: return u / n;
    case Kind::P: {
        if (p_ == 1.0) break;
        Vec phi(u.size());
        for (Eigen::Index i = 0; i < u.size(); ++i)
            phi[i] = std::copysign(std::pow(std::abs(u[i]) / n, p_ - 1.0), u[i]);
        return phi;
    }
    case Kind::Sup: break;
    }
    throw DomainError("norming functional is not unique for the " + name() + " norm");
}

ConeSpec ConeSpec::centred(const Vec& u, double theta, Norm norm)
{
    if (!(theta > 0.0 && theta < 1.0)) throw InputError("cone width theta must lie in (0,1)");
    double n = norm.dual(u);
    if (!(n > 0.0)) throw InputError("cone axis must be nonzero");
    ConeSpec c;
    c.kind = Kind::Centred;
    c.u = u;
    if (std::abs(n - 1.0) > 1e-12) {
        warn("cone axis has dual norm " + std::to_string(n) + "; normalized");
        c.u = u / n;
    }
    c.theta = theta;
    c.norm = norm;
    return c;
}

ConeSpec ConeSpec::complement(const Eigen::MatrixXd& W, double theta, Norm norm)
{
    if (!(theta > 0.0 && theta < 1.0)) throw InputError("cone width theta must lie in (0,1)");
    ConeSpec c;
    c.kind = Kind::Complement;
    c.W = W;
    c.theta = theta;
    c.norm = norm;
    if (W.cols() > 1 && norm.kind() != Norm::Kind::Euclidean)
        throw DomainError("conical complements of subspaces of dimension > 1 are only supported in the Euclidean norm");
    return c;
}

ConeSpec ConeSpec::widened(double extra) const
{
    ConeSpec c = *this;
    c.theta = std::min(theta + extra, 1.0);
    return c;
}

int ConeSpec::dim() const
{
    return static_cast<int>(kind == Kind::Centred ? u.size() : W.rows());
}

double distance_to_subspace(const Vec& v, const Eigen::MatrixXd& W, const Norm& norm)
{
    if (W.cols() == 0) return norm(v);
    if (W.rows() != v.size()) throw InputError("subspace and vector dimensions differ");
    if (norm.kind() == Norm::Kind::Euclidean) {
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(W);
        Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(W.rows(), W.cols());
        return (v - Q * (Q.transpose() * v)).norm();
    }
    if (W.cols() > 1) throw DomainError("non-Euclidean distance to a subspace of dimension > 1");
    Vec w = W.col(0);
    double nw = norm(w);
    if (!(nw > 0.0)) return norm(v);
    double nv = norm(v);
    double span = 2.0 * nv / nw;
    return golden_min([&](double lam) { return norm(v - lam * w); }, -span, span);
}

bool cone_member(const ConeSpec& c, const Vec& v)
{
    if (v.size() != c.dim()) throw InputError("vector and cone dimensions differ");
    double nv = c.norm(v);
    if (nv == 0.0) return true;
    if (c.kind == ConeSpec::Kind::Centred) return c.u.dot(v) >= (1.0 - c.theta) * nv;
    return distance_to_subspace(v, c.W, c.norm) >= (1.0 - c.theta) * nv;
}

double fragment_direction_fraction(const CurveFragment& gamma, const ConeSpec& c, const VecMap& F,
                                   const DirectionOptions& opts)
{
    double total = gamma.domain_measure();
    if (total == 0.0) return 1.0;
    double good = 0.0;
    for (const auto& seg : gamma.segments()) {
        if (!F) {
            Vec v = seg.velocity();
            if (c.norm(v) > 0.0 && cone_member(c, v)) good += seg.duration();
            continue;
        }
        const int n = std::max(opts.subdivisions, 1);
        Vec prev = F(seg.p0);
        for (int i = 1; i <= n; ++i) {
            double t = i == n ? seg.t1 : seg.t0 + seg.duration() * i / n;
            Vec cur = F(seg.at(t));
            double h = seg.duration() / n;
            Vec v = (cur - prev) / h;
            if (c.norm(v) > 0.0 && cone_member(c, v)) good += h;
            prev = std::move(cur);
        }
    }
    return good / total;
}

namespace {

double convexity_modulus(const Norm& norm, double eps)
{
    switch (norm.kind()) {
    case Norm::Kind::Euclidean: return 1.0 - std::sqrt(1.0 - eps * eps / 4.0);
    case Norm::Kind::P: {
        double p = norm.exponent();
        if (p >= 2.0) return 1.0 - std::pow(1.0 - std::pow(eps / 2.0, p), 1.0 / p);
        if (p > 1.0) return (p - 1.0) * eps * eps / 8.0;
        break;
    }
    case Norm::Kind::Sup: break;
    }
    throw DomainError("the " + norm.name() + " norm is not uniformly convex");
}

}  // namespace

double uniform_extremality_modulus(const Norm& norm, double eps)
{
    if (!(eps > 0.0)) throw InputError("eps must be positive");
    if (eps > 2.0) return INFINITY;
    // |u - v| >= eps forces phi_u(u - v) >= 2 * modulus of convexity.
    return 2.0 * convexity_modulus(norm, eps);
}

double uniform_extremality_modulus(const std::function<double(double)>& modulus_of_convexity, double eps)
{
    if (!(eps > 0.0)) throw InputError("eps must be positive");
    if (eps > 2.0) return INFINITY;
    return 2.0 * modulus_of_convexity(eps);
}

}  // namespace lipsquash

#pragma once

#include "lipsquash/common.hpp"
#include "lipsquash/fragments.hpp"

#include <functional>
#include <optional>
#include <string>

namespace lipsquash {

class Norm {
public:
    enum class Kind { Euclidean, Sup, P };

    static Norm euclidean() { return Norm(Kind::Euclidean, 2.0); }
    static Norm sup() { return Norm(Kind::Sup, INFINITY); }
    static Norm p(double p);

    Kind kind() const { return kind_; }
    double exponent() const { return p_; }
    std::string name() const;

    double operator()(const Vec& v) const;
    double dual(const Vec& u) const;
    bool strictly_convex() const;
    // Norm-one functional phi_u with phi_u(u) = |u|, for u != 0 in a smooth norm.
    Vec norming_functional(const Vec& u) const;

private:
    Norm(Kind k, double p) : kind_(k), p_(p) {}
    Kind kind_;
    double p_;
};

// Invoked for recoverable oddities such as a non-unit cone axis.
void set_warning_handler(std::function<void(const std::string&)> handler);
void warn(const std::string& msg);

struct ConeSpec {
    enum class Kind { Centred, Complement };
    Kind kind = Kind::Centred;
    Vec u;                // functional, dual-norm one
    Eigen::MatrixXd W;    // columns span the subspace of a complement
    double theta = 0.5;
    Norm norm = Norm::euclidean();

    static ConeSpec centred(const Vec& u, double theta, Norm norm = Norm::euclidean());
    static ConeSpec complement(const Eigen::MatrixXd& W, double theta, Norm norm = Norm::euclidean());
    ConeSpec widened(double extra) const;
    int dim() const;
};

double distance_to_subspace(const Vec& v, const Eigen::MatrixXd& W, const Norm& norm);
bool cone_member(const ConeSpec& c, const Vec& v);

// Parameter-measure fraction of the fragment where (F o gamma)' is a nonzero cone member.
struct DirectionOptions {
    int subdivisions = 16;  // chords per segment when F is not the identity
};
double fragment_direction_fraction(const CurveFragment& gamma, const ConeSpec& c, const VecMap& F = nullptr,
                                   const DirectionOptions& opts = {});

// delta(eps) with phi_u(u - v) < delta => |u - v| < eps for unit u, v.
double uniform_extremality_modulus(const Norm& norm, double eps);
double uniform_extremality_modulus(const std::function<double(double)>& modulus_of_convexity, double eps);

}  // namespace lipsquash

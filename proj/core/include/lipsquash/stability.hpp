#pragma once

#include "lipsquash/cones.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace lipsquash {

// Uniformly sampled curve, parametrized by arclength in the sampling norm.
struct SampledCurve {
    std::vector<double> t;
    std::vector<Vec> x;

    std::size_t size() const { return t.size(); }
    double a() const { return t.front(); }
    double b() const { return t.back(); }

    static SampledCurve from_function(const std::function<Vec(double)>& gamma, double a, double b,
                                      std::size_t samples);
    static SampledCurve segment(const Vec& p, const Vec& q, std::size_t samples);
    // Arc of the circle of the given radius about center, from angle0 to angle1.
    static SampledCurve circle_arc(double radius, double angle0, double angle1, std::size_t samples,
                                   const Vec& center = Vec::Zero(2));
};

// Central differences inside, one-sided at the ends.
std::vector<Vec> sample_derivatives(const SampledCurve& c);

struct SlopePartition {
    std::vector<double> breakpoints;
    std::vector<double> slopes;      // chord length over parameter length per piece
    std::vector<double> deviations;  // sup of |gamma' - chord velocity| on the samples of the piece
    std::vector<Vec> chord_velocities;

    std::size_t pieces() const { return slopes.size(); }
};

SlopePartition slope_partition(const SampledCurve& gamma, double s, double eps, const Norm& norm = Norm::euclidean());

enum class EstimateOutcome { Holds, Fails, Vacuous, VacuousStrict };
std::string to_string(EstimateOutcome o);

struct RectEstimate {
    double A = 0.0;
    double chord_norm = 0.0;
    double eps = 0.0;                 // measured sup deviation of f on the curve
    double threshold = 0.0;           // 1 - sqrt(A)
    double fraction = 0.0;            // parameter fraction where phi((f o gamma)') > threshold
    EstimateOutcome outcome = EstimateOutcome::Fails;

    bool holds() const { return outcome == EstimateOutcome::Holds; }
};

// phi defaults to the norming functional of the chord.
RectEstimate rect_estimate_check(const SampledCurve& gamma, const VecMap& f, const std::optional<Vec>& phi = std::nullopt,
                                 const Norm& norm = Norm::euclidean());

// Largest |f(x) - f(y)| / |x - y| over consecutive samples and all pairs of an evenly strided subset.
double sampled_lipschitz(const std::vector<Vec>& pts, const VecMap& f, const Norm& norm, std::size_t subset = 400);

struct StabilityReport {
    double delta = 0.0;
    double eps = 0.0;
    double deviation_fraction = 0.0;
    bool bound_holds = false;
    bool guaranteed = false;  // norm strictly convex, so the sweep must eventually hold
    double lipschitz = 0.0;
};

StabilityReport stability_experiment(const SampledCurve& gamma, const VecMap& f, double delta,
                                     const Norm& norm = Norm::euclidean());

// Maps of sup deviation eps from the identity on the curve, indexed by eps.
using PerturbationFamily = std::function<VecMap(double eps)>;

// Projection onto the ball of radius rho - eps about center.
PerturbationFamily radial_family(const Vec& center, double rho);
// Projection onto the inscribed regular n-gon of the circle, with n the least whose
// sagitta rho * (1 - cos(pi/n)) is at most eps.
PerturbationFamily polygon_family(const Vec& center, double rho);
Vec project_to_convex_polygon(const std::vector<Vec>& vertices, const Vec& p);

struct SweepResult {
    std::vector<StabilityReport> rows;
    std::optional<std::size_t> first_holding;
    bool tail_nonincreasing = false;  // deviation fraction from first_holding on

    std::optional<double> found_eps() const;
};

// eps_j = eps0 * 2^-j for j = 0..steps-1.
SweepResult stability_sweep(const SampledCurve& gamma, const PerturbationFamily& family, double delta, double eps0,
                            int steps, const Norm& norm = Norm::euclidean());

struct SawtoothRow {
    int teeth = 0;
    double sup_dev = 0.0;
    double deviation_fraction = 0.0;
    bool bound_holds = false;
};

// gamma(t) = t e1 on [0,1] against x -> (x1, dist(x1, Z/n)), both in the sup norm.
SampledCurve sawtooth_base(int teeth, int samples_per_half_tooth = 8);
VecMap sawtooth_map(int teeth);
SawtoothRow sawtooth_demo(int teeth, double delta = 0.5, int samples_per_half_tooth = 8);

}  // namespace lipsquash

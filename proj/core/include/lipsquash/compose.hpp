#pragma once

#include "lipsquash/measure.hpp"
#include "lipsquash/planar.hpp"
#include "lipsquash/realline.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace lipsquash {

using Metric = std::function<double(const Vec&, const Vec&)>;

double euclidean_distance(const Vec& x, const Vec& y);

// x -> min over samples of value + L * d(x, sample).
ScalarMap mcshane_extend(const std::vector<Vec>& points, const std::vector<double>& values, const Metric& d, double L);

struct ExtensionParams {
    double Delta = 0.0;
    double eps0 = 0.0;
};

// First point Delta_max / 2 of the grid Delta_max * 2^-j, Delta_max = eps / (2 Lip + delta);
// eps0 only shrinks further down the grid.
ExtensionParams extension_parameters(double delta, double eps, double lip_phi);
// Supremum of admissible eps0 over all Delta.
double max_feasible_eps0(double delta, double eps, double lip_phi);

struct Extension {
    ScalarMap g;
    ExtensionParams params;
    double sample_deviation = 0.0;  // sup over S of |g - phi|
    std::size_t anchors = 0;
    double sup_deviation = 0.0;     // sup over grid and S of |g - phi|
    double max_excess = 0.0;        // worst |g(y)-g(z)| - |phi(y)-phi(z)| - delta d(y,z)
};

// Extends g from S so that |g(y)-g(z)| <= |phi(y)-phi(z)| + delta d(y,z) and |g - phi| < eps,
// both re-verified on grid and S.
Extension extend_with_error(const std::vector<Vec>& S, const std::vector<double>& g_on_S, const ScalarMap& phi,
                            double lip_phi, double delta, double eps, const std::vector<Vec>& grid);

struct FlatnessRadius {
    double r = 0.0;
    std::size_t pairs_checked = 0;
    double min_ratio = 0.0;  // min fiber distance * delta / |s - t| over checked value pairs
};

FlatnessRadius flatness_pushforward_radius(const std::vector<Vec>& S, const std::vector<double>& f_on_S, double rho,
                                           double delta);

struct BasicPerturbationOracle {
    std::string name;
    std::vector<Vec> S;
    ScalarMap f;
    ScalarMap TF;
    double rho = 0.0;
    double theta = 0.5;
    double norm_T = 1.0;
    double lip_F = 1.0;
    double eps0 = 0.0;  // f stays within eps0 / 2 of TF

    double flatness() const { return 3.0 * (1.0 - theta) * norm_T * lip_F; }
};

struct OracleChecks {
    bool perturbation_ok = false;
    bool accuracy_ok = false;
    bool local_flatness_ok = false;
    double max_perturbation_excess = 0.0;
    double max_accuracy_gap = 0.0;
    double max_flatness_excess = 0.0;

    bool all() const { return perturbation_ok && accuracy_ok && local_flatness_ok; }
};

OracleChecks check_oracle(const BasicPerturbationOracle& o, const std::vector<Vec>& extra = {});

// f = T x on the sample set.
BasicPerturbationOracle exact_projection_oracle(const std::vector<Vec>& S, const Vec& T, double theta, double rho,
                                                double eps0);
// f = gap integral of a projected cover of total below eps0 / 2, composed with the axis
// projection; rho stays below the smallest gap so f is constant on rho-close pairs.
BasicPerturbationOracle gap_projection_oracle(const FractalFixture& fix, int axis, double theta, double eps0);

// eps0 the oracle must reach for compose_squash at this eps and delta.
double required_oracle_accuracy(double eps, double delta, double norm_T = 1.0, double lip_F = 1.0);

struct ComposeChecks {
    bool oracle_ok = false;
    bool lipschitz_ok = false;
    bool deviation_ok = false;
    bool mass_ok = false;
    bool image_ok = false;
    double max_excess = 0.0;
    double sup_deviation = 0.0;
    double E_mass = 0.0;
    std::size_t image_size = 0;
    std::size_t image_bound = 0;

    bool all() const { return oracle_ok && lipschitz_ok && deviation_ok && mass_ok && image_ok; }
};

struct ComposedSquash {
    ScalarMap g;
    std::vector<std::size_t> E;  // atom indices into mu
    std::vector<double> finite_image;
    double delta = 0.0;
    double eps = 0.0;
    double eta = 0.0;
    double r = 0.0;
    SquashResult h;
    Extension extension;
    ComposeChecks checks;
};

ComposedSquash compose_squash(const BasicPerturbationOracle& oracle, const DiscreteMeasure& mu, double eta, double eps,
                              double delta, const std::vector<Vec>& grid);

// Theta meeting the width budget N * 3 * (1 - theta) <= delta for the height N of eta.
double theta_for_budget(double eta, double delta);

struct Recombination {
    VecMap sigma;
    double lipschitz_ratio = 0.0;
    double lipschitz_bound = 0.0;
    bool lipschitz_ok = false;
    bool containment_ok = true;
    std::vector<Vec> image;  // distinct sigma values on the listed points
};

// sigma = P F + sum_{i >= d} g_i b_i with P the orthogonal projection onto span(b_0..b_{d-1}).
// Checks Lip(sigma) <= Lip(F) (1 + delta * C) on sample pairs, with C = sqrt(m) unless given,
// and that b_i . sigma lands in H[i - d] on the points of E.
Recombination coordinate_recombine(const VecMap& F, double lip_F, const std::vector<ScalarMap>& g,
                                   const Eigen::MatrixXd& basis, int d, double delta, const std::vector<Vec>& samples,
                                   const std::vector<Vec>& E = {}, const std::vector<std::vector<double>>& H = {},
                                   double C = -1.0);

enum class ComposeMode { Product, Recombine };

struct FixtureComposeParams {
    double eta = 0.1;
    double eps = 0.02;
    double delta = 0.5;
    double theta = -1.0;  // negative: theta_for_budget per coordinate
    int grid = 33;        // per axis, over the fixture box with a 10% margin
};

struct FixtureCompose {
    ComposeMode mode = ComposeMode::Product;
    std::vector<ComposedSquash> coords;  // squashed coordinates
    Recombination sigma;
    std::vector<std::size_t> E;
    double E_mass = 0.0;
    std::vector<Vec> image;
    double sup_deviation = 0.0;           // Euclidean, over grid and atoms
    double coordinate_sup_deviation = 0.0;
    bool contracts_ok = false;
};

// Product: both axes squashed with eta / 2 each, d = 0. Recombine: d = 1, W = span e1,
// the second axis squashed with the full eta.
FixtureCompose compose_fixture(const FractalFixture& fix, ComposeMode mode, const FixtureComposeParams& p = {});

// Membership witness for {f : some E with mu(E) >= 1 - eta has content^(d + delta)(f(E)) < eps}.
// radius is a sup distance on E within which every other map stays a member, read off the
// inflated cover of f(E).
struct GoodSetWitness {
    double E_mass = 0.0;
    double s = 0.0;
    double content_upper = 0.0;
    CoverWitness witness;
    bool member = false;
    double radius = 0.0;
};

GoodSetWitness good_set_witness(const DiscreteMeasure& mu, const VecMap& f, const std::vector<std::size_t>& E, int d,
                                double delta, double eta, double eps);

// Runs the witness along a sequence of maps, typically f_n -> f, and reports whether each
// one is a member and whether it lies inside the radius certified by its predecessor.
struct GoodSetTrace {
    std::vector<GoodSetWitness> steps;
    std::vector<double> sup_change;  // sup over E of |f_n - f_{n-1}|, first entry 0
    bool radius_consistent = true;
};

GoodSetTrace good_set_trace(const DiscreteMeasure& mu, const std::vector<VecMap>& maps,
                            const std::vector<std::size_t>& E, int d, double delta, double eta, double eps);

std::vector<Vec> box_grid(const std::vector<Vec>& pts, int per_axis, double margin = 0.1);

}  // namespace lipsquash

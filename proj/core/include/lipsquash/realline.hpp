#pragma once

#include "lipsquash/measure.hpp"

#include <cstddef>
#include <vector>

namespace lipsquash {

// Periodic density profile: height N on [t0 + kR, t0 + kR + R/N), zero on the rest
// of each period. The integral g from t0 is the squashing map; h = lambda * g.
class SquashProfile {
public:
    SquashProfile(double R, int N, double t0, double lambda = 1.0);

    // Profile whose phase is the i-th lattice shift i*R/N, evaluated in lattice
    // coordinates so that the N shifts tile the line exactly in floating point.
    static SquashProfile lattice(double R, int N, int shift, double lambda = 1.0);

    double R() const { return R_; }
    int N() const { return N_; }
    double t0() const { return t0_; }
    double lambda() const { return lambda_; }
    int shift() const { return shift_; }

    SquashProfile with_lambda(double lambda) const;

    bool in_I(double t) const;
    // Index k of the period [t0 + kR, t0 + (k+1)R) holding t.
    long long period(double t) const;
    double phi(double t) const;
    double g(double t) const;
    double h(double t) const { return lambda_ * g(t); }

private:
    struct Local {
        long long k;
        bool in_I;
        double frac;  // position inside I_k in units of R/N, in [0,1)
    };
    Local locate(double t) const;

    double R_;
    int N_;
    double t0_;
    double lambda_;
    double base_;
    int shift_;
};

double phi_eval(const SquashProfile& p, double t);
double g_eval(const SquashProfile& p, double t);

// Mass of the union of the I_k for each of the N lattice shifts.
std::vector<double> shift_masses(const DiscreteMeasure& mu, double R, int N);
int choose_shift(const DiscreteMeasure& mu, double R, int N);
double choose_t0(const DiscreteMeasure& mu, double R, int N);
double covered_mass(const DiscreteMeasure& mu, const SquashProfile& p);

// |t0| + R, checked against max |g(t) - t| on a grid of [-D, D].
double sup_distance_bound(const SquashProfile& p, double D, std::size_t grid = 10001);

// (n+1)/(n-1) with n = floor(|s-t|/R); checked against the measured ratio.
double large_scale_ratio_bound(const SquashProfile& p, double s, double t);
double large_scale_formula(double R, double gap);

struct SquashChecks {
    double sup_deviation = 0.0;
    bool sup_ok = false;
    double max_lipschitz_ratio = 0.0;
    bool lipschitz_ok = false;
    double max_far_ratio = 0.0;
    bool far_ok = false;
    double E_mass = 0.0;
    bool mass_ok = false;
    std::size_t image_size = 0;
    std::size_t image_bound = 0;
    bool image_ok = false;

    bool all() const { return sup_ok && lipschitz_ok && far_ok && mass_ok && image_ok; }
};

struct SquashParams {
    double eta = 0.1;
    double eps = 0.01;
    double r = 0.05;
    double D = 1.0;
    int L = 0;
};

struct SquashResult {
    SquashProfile profile{1.0, 2, 0.0};
    SquashParams params;
    std::vector<std::size_t> E;  // atom indices
    std::vector<double> concentrated_image;
    SquashChecks checks;
    bool degenerate = false;  // r >= 2D: the far-pair contract is vacuous

    double operator()(double t) const;
    double E_mass(const DiscreteMeasure& mu) const { return mu.mass_of(E); }
};

struct BuildOptions {
    std::size_t grid = 10000;
};

int squash_height(double eta);
double post_scale(double eps, double D);
double select_period(double eps, double r, double lambda);

SquashResult build_h(const DiscreteMeasure& mu, double eta, double r, double eps, double D,
                     const BuildOptions& opts = {});

}  // namespace lipsquash

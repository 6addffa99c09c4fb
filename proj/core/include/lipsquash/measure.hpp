#pragma once

#include "lipsquash/common.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace lipsquash {

// Coordinates snapped to the 1e-12 grid; equal keys mean the same atom.
Vec canonical_point(const Vec& p);

class DiscreteMeasure {
public:
    DiscreteMeasure() = default;
    explicit DiscreteMeasure(int dim);
    DiscreteMeasure(int dim, const std::vector<Vec>& points, const std::vector<double>& weights);

    static DiscreteMeasure on_line(const std::vector<double>& points, const std::vector<double>& weights);
    static DiscreteMeasure uniform(int dim, const std::vector<Vec>& points);

    // Adds w to the atom at p, creating it if needed.
    void add(const Vec& p, double w);

    int dim() const { return dim_; }
    std::size_t size() const { return points_.size(); }
    bool empty() const { return points_.empty(); }
    const Vec& point(std::size_t i) const { return points_[i]; }
    double weight(std::size_t i) const { return weights_[i]; }
    const std::vector<Vec>& points() const { return points_; }
    const std::vector<double>& weights() const { return weights_; }

    double total_mass() const;
    std::optional<std::size_t> find(const Vec& p) const;
    double mass_of(const std::vector<std::size_t>& atoms) const;

    DiscreteMeasure normalized() const;
    DiscreteMeasure restricted(const std::vector<std::size_t>& atoms) const;

    // Line measures only: coordinates of the atoms.
    std::vector<double> line_points() const;

private:
    int dim_ = 1;
    std::vector<Vec> points_;
    std::vector<double> weights_;
    std::map<std::vector<double>, std::size_t> index_;
};

DiscreteMeasure pushforward(const DiscreteMeasure& mu, const VecMap& f);
DiscreteMeasure pushforward_line(const DiscreteMeasure& mu, const ScalarMap& f);

struct AveragingResult {
    bool precondition_ok = false;
    std::string reason;
    double mean = 0.0;
    double threshold = 0.0;       // 1 - sqrt(A)
    double threshold_mass = 0.0;  // mass of {xi > 1 - sqrt(A)}
    bool holds = false;
    // A = 0 leaves the strict conclusion empty; flagged rather than judged.
    bool vacuous_strict = false;
};

AveragingResult averaging_bound(const std::vector<std::pair<double, double>>& xi, double A);

struct AcWithErrorResult {
    bool claimed = false;
    std::string reason;
    std::vector<std::size_t> E;  // atom indices into nu
    double mu_outside = 0.0;
    double epsilon_used = 0.0;
    double deficit = 0.0;
    // Threshold the generic proof would use, t0^2 / nu(R) with t0 = alpha / max g.
    double epsilon_generic = 0.0;
};

AcWithErrorResult ac_with_error(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                const DiscreteMeasure& nu_tilde, double alpha);

}  // namespace lipsquash

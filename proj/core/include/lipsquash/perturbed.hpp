#pragma once

#include "lipsquash/cones.hpp"
#include "lipsquash/fragments.hpp"

#include <cstddef>

namespace lipsquash {

struct PerturbedOptions {
    double r = -1.0;            // negative means 0.1 * theta
    int base_subsegments = 64;  // per fragment segment
    int max_depth = 40;         // bisection depth at a keep/drop boundary
};

struct PerturbedResult {
    Restriction restricted;
    FragmentFamily pushed;
    double mass_loss = 0.0;
    double r = 0.0;
    ConeSpec pushed_cone;
    double pushed_speed_floor = 0.0;
    double min_pushed_speed = 0.0;
    double min_pushed_extremality = 1.0;  // min <u, v> / |v| over pushed velocities
    bool certified = false;
};

// <u, v> / |v|, zero for v = 0.
double extremality(const ConeSpec& cone, const Vec& v);

// Keeps the parameters where the chord derivative of f o gamma lies in the cone widened
// by r with speed at least delta_speed - r, then pushes the kept pieces through f.
PerturbedResult perturbed_representation(const FragmentFamily& eta, const VecMap& f, const ConeSpec& cone,
                                         double delta_speed, const PerturbedOptions& opts = {});

}  // namespace lipsquash

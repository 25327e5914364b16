#pragma once
// Random generators shared by the unit and acceptance suites.

#include "fibersim/lifting.hpp"
#include "fibersim/path.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

namespace fibersim::testing {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline Vec2 random_vec(Rng& rng, double half_width) {
    return {uniform(rng, -half_width, half_width), uniform(rng, -half_width, half_width)};
}

inline Vec2 unit(double angle) { return {std::cos(angle), std::sin(angle)}; }

/// Admissible config with |cM - cN| in [dmin, dmax].
inline Config random_config(Rng& rng, double dmin = 2.0, double dmax = 6.0, double spread = 5.0) {
    const Vec2 cn = random_vec(rng, spread);
    const double r = uniform(rng, dmin, dmax);
    return {cn + unit(uniform(rng, 0.0, 2.0 * std::numbers::pi)) * r, cn};
}

inline Config random_boundary_config(Rng& rng) { return random_config(rng, 2.0, 2.0); }

/// Natural cubic spline through `count` waypoints: a random walk from `start`.
inline SplineCurve random_spline(Rng& rng, Vec2 start, double t1 = 1.0, int count = 6,
                                 double step = 1.0) {
    std::vector<Vec2> pts{start};
    for (int i = 1; i < count; ++i) pts.push_back(pts.back() + random_vec(rng, step));
    return SplineCurve(std::move(pts), 0.0, t1);
}

/// One of the built-in mechanisms, chosen and parametrized at random.
inline Mechanism random_builtin(Rng& rng) {
    switch (std::uniform_int_distribution<int>(0, 5)(rng)) {
        case 0: return mech_copy();
        case 1: return mech_damped();
        case 2: return mech_radial(uniform(rng, -1.0, 1.0));
        case 3: return mech_orbit(uniform(rng, -2.0, 2.0));
        case 4: return mech_linear_const(uniform(rng, 0.1, 2.0), uniform(rng, -1.0, 1.0));
        default: return add_form(mech_copy(), {pushing_form()});
    }
}

}  // namespace fibersim::testing

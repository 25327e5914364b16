#pragma once
/**
 * @file integrate.hpp
 * @brief Path lifting: solve d(lift)/dt = L(lift, d(gamma)/dt), lift(t0) = e0.
 *
 * Fixed-step classical RK4 on the fiber coordinate cM. The base coordinate of
 * every stored node is copied from gamma, so p(lift(t_k)) == gamma(t_k) holds
 * bitwise. Integration stops at the first boundary crossing; the crossing is
 * located by bisection on a partial step.
 */

#include "fibersim/lifting.hpp"
#include "fibersim/path.hpp"

#include <optional>

namespace fibersim {

inline constexpr double kDefaultStep = 1e-3;
inline constexpr double kCollisionLocateTol = 1e-9;

struct LiftOptions {
    double step{kDefaultStep};
    /// Integrate over [gamma.t0(), t_end] instead of the full curve.
    std::optional<double> t_end{};
};

struct LiftOutcome {
    TotalPath path;
    bool completed{false};
    std::optional<double> collision_time{};
};

/// One RK4 step of the fiber coordinate from time t over h along gamma.
Vec2 rk4_step(const Mechanism& l, const BaseCurve& gamma, double t, const Vec2& cM, double h);

/// Number of uniform steps used for an interval, so that spacing <= step.
std::size_t step_count(double duration, double step);

LiftOutcome integrate_lift(const Mechanism& l, const Config& e0, const BaseCurve& gamma,
                           const LiftOptions& options = {});

/// Lift along a sampled base path (cubic Hermite, central-difference velocities).
LiftOutcome integrate_lift(const Mechanism& l, const Config& e0, const BasePath& gamma,
                           const LiftOptions& options = {});

}  // namespace fibersim

#pragma once
/**
 * @file planner.hpp
 * @brief Parametrized motion planning in the two-disk fiber and its compositions
 * with a reaction mechanism.
 *
 * fiber_plan is the section s: it joins two configurations over the same
 * obstacle position by the shortest path of cM that avoids the open disk of
 * radius 2 about cN. Its branch (Piece) labels the domain of continuity the pair
 * belongs to; the discontinuity set is the tie set where both detour sides have
 * equal length.
 *
 * extended_plan and moving_target_plan compose s with a lifting function. They
 * never introduce new branches: the piece of a composed plan is the piece of the
 * underlying fiber_plan call.
 */

#include "fibersim/integrate.hpp"

#include <array>
#include <functional>
#include <vector>

namespace fibersim {

enum class Piece { Straight, DetourCCW, DetourCW, Degenerate };

std::string_view to_string(Piece p);

/// Constant-speed path of cM in the fiber over cN, parametrized by s in [0, 1].
class FiberPlan {
public:
    Piece piece() const { return piece_; }
    double length() const { return length_; }
    const Config& start() const { return start_; }
    const Config& goal() const { return goal_; }

    /// Exact evaluation; at(0) == start and at(1) == goal bitwise.
    Config at(double s) const;

    /// Uniform samples on [0, 1].
    TotalPath path(std::size_t nodes = 1001) const;

private:
    friend FiberPlan fiber_plan(const Config& e, const Config& e_prime);

    struct Leg {
        // Line: from a to b. Arc: about centre, radius, start angle, signed sweep.
        bool arc{false};
        Vec2 a, b;
        double angle0{0.0}, sweep{0.0};
        double length{0.0};
    };

    Config start_, goal_;
    Piece piece_{Piece::Straight};
    double length_{0.0};
    std::vector<Leg> legs_;
};

/// Throws FiberMismatch when the base points differ by more than 1e-9 and
/// InadmissibleConfig when either endpoint is inadmissible.
FiberPlan fiber_plan(const Config& e, const Config& e_prime);

/// Monotone reparametrization of [0, 1] fixing the endpoints.
class Reparam {
public:
    /// Checks phi(0) = 0, phi(1) = 1 and monotonicity on a 101-point grid.
    explicit Reparam(std::function<double(double)> rule);
    static Reparam identity();
    static Reparam smoothstep();
    double operator()(double s) const { return rule_(s); }

private:
    std::function<double(double)> rule_;
};

struct PlanOptions {
    /// Output intervals on [t0, t1] (nodes - 1 == intervals).
    std::size_t intervals{1000};
    /// Integrator step for every lift.
    double step{kDefaultStep};
    /// Worker threads for the per-node lifts of extended_plan.
    unsigned threads{1};
};

struct PlanOutcome {
    std::vector<double> times;
    std::vector<Config> points;
    bool completed{false};
    /// Composed plans: time of the first node whose construction hit the boundary.
    std::optional<double> collision_time{};
    /// Branch of the fiber_plan call on the input pair (first node for moving targets).
    Piece piece{Piece::Straight};
    /// Branch taken at each node.
    std::vector<Piece> node_pieces;

    /// Requires at least two nodes.
    TotalPath path() const { return TotalPath(times, points); }
};

/// gamma-tilde(t) = lift of s(e, e')(phi(t)) along gamma, evaluated at t.
PlanOutcome extended_plan(const BaseCurve& gamma, const Config& e, const Config& e_prime,
                          const Mechanism& l, const Reparam& phi = Reparam::identity(),
                          const PlanOptions& options = {});

/// output(t) = s(lift of e along p(nu) at t, nu(t))(t), on the nodes of nu.
PlanOutcome moving_target_plan(const Config& e, const TotalPath& nu, const Mechanism& l,
                               const PlanOptions& options = {});

struct PieceHistogram {
    std::array<std::size_t, 4> counts{};
    std::size_t operator[](Piece p) const { return counts[static_cast<std::size_t>(p)]; }
    std::size_t total() const { return counts[0] + counts[1] + counts[2] + counts[3]; }
};

PieceHistogram continuity_pieces(std::span<const std::pair<Config, Config>> pairs);

}  // namespace fibersim

#pragma once
/**
 * @file path.hpp
 * @brief Time-parametrized curves in the base and total spaces.
 *
 * SampledPath is the stored form of a trajectory (piecewise-linear between
 * nodes). BaseCurve is what the lifting integrator consumes: a curve in B with
 * a velocity that is the exact derivative of its position, so that lifted
 * fiber coordinates stay consistent with the obstacle motion.
 */

#include "fibersim/bundle.hpp"
#include "fibersim/error.hpp"

#include <algorithm>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace fibersim {

inline Vec2 lerp(const Vec2& a, const Vec2& b, double s) { return a + (b - a) * s; }
inline Config lerp(const Config& a, const Config& b, double s) {
    return {lerp(a.cM, b.cM, s), lerp(a.cN, b.cN, s)};
}

/// Samples of a curve on a strictly increasing time grid.
template <class State>
class SampledPath {
public:
    SampledPath() = default;

    SampledPath(std::vector<double> times, std::vector<State> points)
        : times_(std::move(times)), points_(std::move(points)) {
        validate();
    }

    /// n >= 2 samples on the uniform grid t0 + (t1 - t0) * k / (n - 1).
    static SampledPath uniform(double t0, double t1, std::vector<State> points) {
        const std::size_t n = points.size();
        if (n < 2) throw Error(ErrorCode::InvalidPath, "a sampled path needs at least 2 samples");
        std::vector<double> times(n);
        for (std::size_t k = 0; k < n; ++k) times[k] = uniform_node(t0, t1, k, n - 1);
        times.back() = t1;
        return SampledPath(std::move(times), std::move(points));
    }

    static double uniform_node(double t0, double t1, std::size_t k, std::size_t intervals) {
        return t0 + (t1 - t0) * static_cast<double>(k) / static_cast<double>(intervals);
    }

    std::size_t size() const { return points_.size(); }
    bool empty() const { return points_.empty(); }
    double t0() const { return times_.front(); }
    double t1() const { return times_.back(); }
    double time(std::size_t k) const { return times_[k]; }
    const State& operator[](std::size_t k) const { return points_[k]; }
    const State& front() const { return points_.front(); }
    const State& back() const { return points_.back(); }
    std::span<const double> times() const { return times_; }
    std::span<const State> points() const { return points_; }

    /// Linear interpolation; clamps outside [t0, t1]. Exact at nodes.
    State at(double t) const {
        if (t <= times_.front()) return points_.front();
        if (t >= times_.back()) return points_.back();
        const auto it = std::upper_bound(times_.begin(), times_.end(), t);
        const std::size_t k = static_cast<std::size_t>(it - times_.begin()) - 1;
        if (t == times_[k]) return points_[k];
        const double s = (t - times_[k]) / (times_[k + 1] - times_[k]);
        return lerp(points_[k], points_[k + 1], s);
    }

    /// Index of the node at time t when t is a node, else npos.
    std::size_t node_index(double t) const {
        const auto it = std::lower_bound(times_.begin(), times_.end(), t);
        if (it == times_.end() || *it != t) return npos;
        return static_cast<std::size_t>(it - times_.begin());
    }

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

private:
    void validate() const {
        if (times_.size() != points_.size())
            throw Error(ErrorCode::InvalidPath, "time and point counts differ");
        if (points_.size() < 2)
            throw Error(ErrorCode::InvalidPath, "a sampled path needs at least 2 samples");
        for (std::size_t k = 0; k < times_.size(); ++k) {
            if (!std::isfinite(times_[k]) || !points_[k].finite())
                throw Error(ErrorCode::InvalidPath, "non-finite sample");
            if (k > 0 && !(times_[k] > times_[k - 1]))
                throw Error(ErrorCode::InvalidPath, "time grid is not strictly increasing");
        }
    }

    std::vector<double> times_;
    std::vector<State> points_;
};

using BasePath = SampledPath<Vec2>;
using TotalPath = SampledPath<Config>;

/// Which one-sided derivative to report at a velocity discontinuity.
enum class Side { Left, Right };

/// A curve t -> b(t) in the base with an exact derivative.
class BaseCurve {
public:
    virtual ~BaseCurve() = default;
    virtual double t0() const = 0;
    virtual double t1() const = 0;
    virtual Vec2 position(double t) const = 0;
    Vec2 velocity(double t, Side side = Side::Right) const { return velocity_at(t, side); }

protected:
    virtual Vec2 velocity_at(double t, Side side) const = 0;
};

class ConstantCurve final : public BaseCurve {
public:
    ConstantCurve(Vec2 point, double t0, double t1) : point_(point), t0_(t0), t1_(t1) {}
    double t0() const override { return t0_; }
    double t1() const override { return t1_; }
    Vec2 position(double) const override { return point_; }
    Vec2 velocity_at(double, Side) const override { return {}; }

private:
    Vec2 point_;
    double t0_, t1_;
};

/// Polyline through (time, point) knots, constant velocity on each segment.
/// Holds the last point after the final knot.
class PolylineCurve final : public BaseCurve {
public:
    PolylineCurve(std::vector<double> knots, std::vector<Vec2> points);
    double t0() const override { return knots_.front(); }
    double t1() const override { return knots_.back(); }
    Vec2 position(double t) const override;
    Vec2 velocity_at(double t, Side side) const override;

private:
    std::size_t segment(double t, Side side) const;
    std::vector<double> knots_;
    std::vector<Vec2> points_;
};

/// Cubic Hermite interpolation of a sampled path, node velocities by central
/// differences (one-sided at the ends). Positions at nodes are the samples.
class SampledCurve final : public BaseCurve {
public:
    explicit SampledCurve(BasePath path);
    double t0() const override { return path_.t0(); }
    double t1() const override { return path_.t1(); }
    Vec2 position(double t) const override;
    Vec2 velocity_at(double t, Side side) const override;
    const BasePath& samples() const { return path_; }
    Vec2 node_velocity(std::size_t k) const { return node_velocity_[k]; }

private:
    BasePath path_;
    std::vector<Vec2> node_velocity_;
};

/// Natural cubic spline through waypoints with uniform knots in time over
/// [t0, t1]. With a speed, the spline is instead traversed at that constant
/// arc-length speed starting at t0 and parks at the last waypoint.
class SplineCurve final : public BaseCurve {
public:
    SplineCurve(std::vector<Vec2> waypoints, double t0, double t1);
    SplineCurve(std::vector<Vec2> waypoints, double t0, double t1, double speed);

    double t0() const override { return t0_; }
    double t1() const override { return t1_; }
    Vec2 position(double t) const override;
    Vec2 velocity_at(double t, Side side) const override;

    /// Total arc length of the spline geometry.
    double length() const { return length_; }
    /// Time at which the traversal reaches the last waypoint.
    double arrival_time() const { return arrival_; }

private:
    struct Param {
        double u;
        double du_dt;
    };
    Param param(double t) const;
    Vec2 eval(double u) const;
    Vec2 deriv(double u) const;
    void fit();
    void build_arclength_table(double speed);

    std::vector<Vec2> waypoints_;
    std::vector<Vec2> second_;  // spline second derivatives at knots
    double t0_, t1_;
    double arrival_;
    double length_{0.0};
    // arc-length parametrization table: u(t) Hermite interpolated
    std::vector<double> table_t_;
    std::vector<double> table_u_;
    std::vector<double> table_du_;
};

/// View of another curve on a sub-interval; the parent must outlive the view.
class RestrictedCurve final : public BaseCurve {
public:
    RestrictedCurve(const BaseCurve& parent, double t0, double t1)
        : parent_(parent), t0_(t0), t1_(t1) {}
    double t0() const override { return t0_; }
    double t1() const override { return t1_; }
    Vec2 position(double t) const override { return parent_.position(t); }
    Vec2 velocity_at(double t, Side side) const override { return parent_.velocity(t, side); }

private:
    const BaseCurve& parent_;
    double t0_, t1_;
};

/// Samples a base curve on n uniform nodes.
BasePath sample(const BaseCurve& curve, std::size_t nodes);

}  // namespace fibersim

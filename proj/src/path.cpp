#include "fibersim/path.hpp"

#include <array>
#include <cmath>

namespace fibersim {

namespace {

struct Hermite {
    double h00, h10, h01, h11;     // basis values
    double d00, d10, d01, d11;     // basis derivatives with respect to t
};

Hermite hermite_basis(double s, double h) {
    const double s2 = s * s;
    const double s3 = s2 * s;
    return {2 * s3 - 3 * s2 + 1, (s3 - 2 * s2 + s) * h, -2 * s3 + 3 * s2, (s3 - s2) * h,
            (6 * s2 - 6 * s) / h,  3 * s2 - 4 * s + 1,   (-6 * s2 + 6 * s) / h, 3 * s2 - 2 * s};
}

// Index k with times[k] <= t < times[k+1], clamped to a valid segment.
std::size_t segment_index(std::span<const double> times, double t) {
    const auto it = std::upper_bound(times.begin(), times.end(), t);
    std::size_t k = it == times.begin() ? 0 : static_cast<std::size_t>(it - times.begin()) - 1;
    return std::min(k, times.size() - 2);
}

}  // namespace

// ---------------------------------------------------------------- PolylineCurve

PolylineCurve::PolylineCurve(std::vector<double> knots, std::vector<Vec2> points)
    : knots_(std::move(knots)), points_(std::move(points)) {
    // reuse the sampled path validation
    BasePath check(knots_, points_);
    (void)check;
}

std::size_t PolylineCurve::segment(double t, Side side) const {
    const std::size_t n = knots_.size();
    if (side == Side::Right) {
        const auto it = std::upper_bound(knots_.begin(), knots_.end(), t);
        return static_cast<std::size_t>(it - knots_.begin()) - 1;  // may be n-1: parked
    }
    const auto it = std::lower_bound(knots_.begin(), knots_.end(), t);
    const std::size_t k = static_cast<std::size_t>(it - knots_.begin());
    return k == 0 ? n : k - 1;  // n: before the start
}

Vec2 PolylineCurve::position(double t) const {
    if (t <= knots_.front()) return points_.front();
    if (t >= knots_.back()) return points_.back();
    const std::size_t k = segment_index(knots_, t);
    const double s = (t - knots_[k]) / (knots_[k + 1] - knots_[k]);
    return lerp(points_[k], points_[k + 1], s);
}

Vec2 PolylineCurve::velocity_at(double t, Side side) const {
    if (t < knots_.front() || t > knots_.back()) return {};
    const std::size_t k = segment(t, side);
    if (k + 1 >= knots_.size()) return {};
    return (points_[k + 1] - points_[k]) / (knots_[k + 1] - knots_[k]);
}

// ---------------------------------------------------------------- SampledCurve

SampledCurve::SampledCurve(BasePath path) : path_(std::move(path)) {
    const std::size_t n = path_.size();
    node_velocity_.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t lo = k == 0 ? 0 : k - 1;
        const std::size_t hi = k + 1 == n ? k : k + 1;
        node_velocity_[k] = (path_[hi] - path_[lo]) / (path_.time(hi) - path_.time(lo));
    }
}

Vec2 SampledCurve::position(double t) const {
    if (t <= path_.t0()) return path_.front();
    if (t >= path_.t1()) return path_.back();
    const std::size_t k = segment_index(path_.times(), t);
    const double h = path_.time(k + 1) - path_.time(k);
    const auto b = hermite_basis((t - path_.time(k)) / h, h);
    return path_[k] * b.h00 + node_velocity_[k] * b.h10 + path_[k + 1] * b.h01 +
           node_velocity_[k + 1] * b.h11;
}

Vec2 SampledCurve::velocity_at(double t, Side) const {
    if (t < path_.t0() || t > path_.t1()) return {};
    const std::size_t k = segment_index(path_.times(), t);
    const double h = path_.time(k + 1) - path_.time(k);
    const auto b = hermite_basis((t - path_.time(k)) / h, h);
    return path_[k] * b.d00 + node_velocity_[k] * b.d10 + path_[k + 1] * b.d01 +
           node_velocity_[k + 1] * b.d11;
}

// ---------------------------------------------------------------- SplineCurve

SplineCurve::SplineCurve(std::vector<Vec2> waypoints, double t0, double t1)
    : waypoints_(std::move(waypoints)), t0_(t0), t1_(t1), arrival_(t1) {
    if (!(t1 > t0)) throw Error(ErrorCode::InvalidPath, "spline time interval is empty");
    fit();
}

SplineCurve::SplineCurve(std::vector<Vec2> waypoints, double t0, double t1, double speed)
    : waypoints_(std::move(waypoints)), t0_(t0), t1_(t1), arrival_(t1) {
    if (!(t1 > t0)) throw Error(ErrorCode::InvalidPath, "spline time interval is empty");
    if (!(speed > 0.0) || !std::isfinite(speed))
        throw Error(ErrorCode::InvalidPath, "spline speed must be positive");
    fit();
    build_arclength_table(speed);
}

void SplineCurve::fit() {
    const std::size_t n = waypoints_.size();
    if (n < 2) throw Error(ErrorCode::InvalidPath, "a spline needs at least 2 waypoints");
    for (const auto& w : waypoints_)
        if (!w.finite()) throw Error(ErrorCode::InvalidPath, "non-finite waypoint");
    second_.assign(n, Vec2{});
    if (n == 2) return;
    // Thomas algorithm for M[i-1] + 4 M[i] + M[i+1] = 6 (y[i+1] - 2 y[i] + y[i-1]),
    // natural ends M[0] = M[n-1] = 0.
    const std::size_t m = n - 2;
    std::vector<double> c(m);
    std::vector<Vec2> d(m);
    for (std::size_t i = 0; i < m; ++i) {
        const Vec2 rhs = (waypoints_[i + 2] - waypoints_[i + 1] * 2.0 + waypoints_[i]) * 6.0;
        const double denom = i == 0 ? 4.0 : 4.0 - c[i - 1];
        c[i] = 1.0 / denom;
        d[i] = i == 0 ? rhs / denom : (rhs - d[i - 1]) / denom;
    }
    second_[m] = d[m - 1];
    for (std::size_t i = m - 1; i-- > 0;) second_[i + 1] = d[i] - second_[i + 2] * c[i];
}

Vec2 SplineCurve::eval(double u) const {
    const std::size_t n = waypoints_.size();
    u = std::clamp(u, 0.0, static_cast<double>(n - 1));
    const std::size_t i = std::min(static_cast<std::size_t>(u), n - 2);
    const double s = u - static_cast<double>(i);
    const double r = 1.0 - s;
    return waypoints_[i] * r + waypoints_[i + 1] * s +
           second_[i] * ((r * r * r - r) / 6.0) + second_[i + 1] * ((s * s * s - s) / 6.0);
}

Vec2 SplineCurve::deriv(double u) const {
    const std::size_t n = waypoints_.size();
    u = std::clamp(u, 0.0, static_cast<double>(n - 1));
    const std::size_t i = std::min(static_cast<std::size_t>(u), n - 2);
    const double s = u - static_cast<double>(i);
    const double r = 1.0 - s;
    return (waypoints_[i + 1] - waypoints_[i]) + second_[i] * ((1.0 - 3.0 * r * r) / 6.0) +
           second_[i + 1] * ((3.0 * s * s - 1.0) / 6.0);
}

namespace {

// 5-point Gauss-Legendre on [0, 1].
constexpr std::array<double, 5> kGlNodes{0.04691007703066800, 0.23076534494715845, 0.5,
                                         0.76923465505284155, 0.95308992296933200};
constexpr std::array<double, 5> kGlWeights{0.11846344252809454, 0.23931433524968324,
                                           0.28444444444444444, 0.23931433524968324,
                                           0.11846344252809454};

}  // namespace

void SplineCurve::build_arclength_table(double speed) {
    constexpr int kSub = 32;  // quadrature cells per knot interval
    const std::size_t segments = waypoints_.size() - 1;
    const std::size_t cells = segments * kSub;
    const double du = 1.0 / kSub;

    std::vector<double> cum(cells + 1, 0.0);
    auto cell_length = [&](double a, double b) {
        double acc = 0.0;
        for (std::size_t q = 0; q < kGlNodes.size(); ++q)
            acc += kGlWeights[q] * deriv(a + (b - a) * kGlNodes[q]).norm();
        return acc * (b - a);
    };
    for (std::size_t c = 0; c < cells; ++c)
        cum[c + 1] = cum[c] + cell_length(c * du, (c + 1) * du);
    length_ = cum.back();
    if (!(length_ > 0.0)) throw Error(ErrorCode::InvalidPath, "spline has zero length");

    auto arc = [&](double u) {
        const std::size_t c = std::min(static_cast<std::size_t>(u / du), cells - 1);
        return cum[c] + cell_length(c * du, u);
    };
    auto invert = [&](double target) {
        const auto it = std::upper_bound(cum.begin(), cum.end(), target);
        const std::size_t c = std::min<std::size_t>(
            it == cum.begin() ? 0 : static_cast<std::size_t>(it - cum.begin()) - 1, cells - 1);
        double lo = c * du, hi = (c + 1) * du;
        double u = lo + du * (target - cum[c]) / std::max(cum[c + 1] - cum[c], 1e-300);
        for (int iter = 0; iter < 60; ++iter) {
            const double f = arc(u) - target;
            if (f > 0) hi = u; else lo = u;
            if (std::abs(f) < 1e-14 * std::max(1.0, length_)) break;
            const double speed_u = deriv(u).norm();
            double next = speed_u > 0 ? u - f / speed_u : 0.5 * (lo + hi);
            if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
            u = next;
        }
        return u;
    };

    const double duration = length_ / speed;
    arrival_ = t0_ + duration;
    const std::size_t nodes = std::max<std::size_t>(257, segments * 256 + 1);
    table_t_.resize(nodes);
    table_u_.resize(nodes);
    table_du_.resize(nodes);
    for (std::size_t k = 0; k < nodes; ++k) {
        const double frac = static_cast<double>(k) / static_cast<double>(nodes - 1);
        table_t_[k] = t0_ + duration * frac;
        table_u_[k] = k + 1 == nodes ? static_cast<double>(segments) : invert(length_ * frac);
        const double speed_u = deriv(table_u_[k]).norm();
        table_du_[k] = speed_u > 1e-12 ? speed / speed_u : 0.0;
    }
    table_t_.back() = arrival_;
}

SplineCurve::Param SplineCurve::param(double t) const {
    const double last = static_cast<double>(waypoints_.size() - 1);
    if (table_t_.empty()) {
        if (t < t0_) return {0.0, 0.0};
        if (t > t1_) return {last, 0.0};
        return {(t - t0_) / (t1_ - t0_) * last, last / (t1_ - t0_)};
    }
    if (t < t0_) return {0.0, 0.0};
    if (t > arrival_) return {last, 0.0};
    const std::size_t k = segment_index(table_t_, t);
    const double h = table_t_[k + 1] - table_t_[k];
    const auto b = hermite_basis((t - table_t_[k]) / h, h);
    return {table_u_[k] * b.h00 + table_du_[k] * b.h10 + table_u_[k + 1] * b.h01 +
                table_du_[k + 1] * b.h11,
            table_u_[k] * b.d00 + table_du_[k] * b.d10 + table_u_[k + 1] * b.d01 +
                table_du_[k + 1] * b.d11};
}

Vec2 SplineCurve::position(double t) const { return eval(param(t).u); }

Vec2 SplineCurve::velocity_at(double t, Side side) const {
    // parked after arrival; the left limit at arrival is still moving
    const double end = table_t_.empty() ? t1_ : arrival_;
    if (t == end && side == Side::Right && !table_t_.empty()) return {};
    const auto p = param(t);
    return deriv(p.u) * p.du_dt;
}

BasePath sample(const BaseCurve& curve, std::size_t nodes) {
    if (nodes < 2) throw Error(ErrorCode::InvalidPath, "need at least 2 nodes");
    std::vector<Vec2> pts(nodes);
    for (std::size_t k = 0; k < nodes; ++k)
        pts[k] = curve.position(BasePath::uniform_node(curve.t0(), curve.t1(), k, nodes - 1));
    return BasePath::uniform(curve.t0(), curve.t1(), std::move(pts));
}

}  // namespace fibersim

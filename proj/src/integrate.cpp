#include "fibersim/integrate.hpp"

#include "fibersim/error.hpp"

#include <cmath>
#include <sstream>

namespace fibersim {

namespace {

Vec2 fiber_rate(const Mechanism& l, const BaseCurve& gamma, double t, const Vec2& cM, Side side) {
    const Vec2 b = gamma.position(t);
    return l.fiber_velocity(Config{cM, b}, BaseTangent{b, gamma.velocity(t, side)});
}

void require_finite(const Vec2& v, double t) {
    if (!v.finite()) {
        std::ostringstream os;
        os << "fiber coordinate became " << v << " at t=" << t;
        throw Error(ErrorCode::NonFiniteState, os.str());
    }
}

}  // namespace

Vec2 rk4_step(const Mechanism& l, const BaseCurve& gamma, double t, const Vec2& cM, double h) {
    const double half = 0.5 * h;
    const Vec2 k1 = fiber_rate(l, gamma, t, cM, Side::Right);
    const Vec2 k2 = fiber_rate(l, gamma, t + half, cM + k1 * half, Side::Right);
    const Vec2 k3 = fiber_rate(l, gamma, t + half, cM + k2 * half, Side::Right);
    const Vec2 k4 = fiber_rate(l, gamma, t + h, cM + k3 * h, Side::Left);
    return cM + (k1 + (k2 + k3) * 2.0 + k4) * (h / 6.0);
}

std::size_t step_count(double duration, double step) {
    const double raw = std::ceil(duration / step - 1e-9);
    return raw < 1.0 ? 1 : static_cast<std::size_t>(raw);
}

LiftOutcome integrate_lift(const Mechanism& l, const Config& e0, const BaseCurve& gamma,
                           const LiftOptions& options) {
    if (!(options.step > 0.0) || !std::isfinite(options.step))
        throw Error(ErrorCode::InvalidParameters, "step must be positive and finite");
    require_admissible(e0, "initial configuration");

    const double t0 = gamma.t0();
    const double t_end = options.t_end.value_or(gamma.t1());
    if (!(t_end > t0)) throw Error(ErrorCode::InvalidPath, "lift interval is empty");

    const Vec2 b0 = gamma.position(t0);
    if ((project(e0) - b0).norm() > 1e-9) {
        std::ostringstream os;
        os << "p(e0)=" << project(e0) << " but gamma(t0)=" << b0;
        throw Error(ErrorCode::BasePointMismatch, os.str());
    }

    const std::size_t n = step_count(t_end - t0, options.step);
    std::vector<double> times;
    std::vector<Config> points;
    times.reserve(n + 1);
    points.reserve(n + 1);
    times.push_back(t0);
    points.push_back(e0);

    Vec2 cM = e0.cM;
    double t = t0;
    for (std::size_t k = 1; k <= n; ++k) {
        const double t_next = k == n ? t_end : BasePath::uniform_node(t0, t_end, k, n);
        const double h = t_next - t;
        const Vec2 next = rk4_step(l, gamma, t, cM, h);
        require_finite(next, t_next);
        const Config e_next{next, gamma.position(t_next)};

        if (boundary_distance(e_next) < -kAdmissibilityTol) {
            // Bisect the partial step length on the sign of the boundary distance.
            double lo = 0.0, hi = h;
            Config hit = e_next;
            double tau = h;
            for (int iter = 0; iter < 200; ++iter) {
                const double mid = 0.5 * (lo + hi);
                if (mid <= lo || mid >= hi) break;
                const Config probe{rk4_step(l, gamma, t, cM, mid), gamma.position(t + mid)};
                require_finite(probe.cM, t + mid);
                const double bd = boundary_distance(probe);
                if (bd < 0.0) {
                    hi = mid;
                    hit = probe;
                    tau = mid;
                } else {
                    lo = mid;
                }
                if (std::abs(bd) <= 0.1 * kCollisionLocateTol) {
                    hit = probe;
                    tau = mid;
                    break;
                }
            }
            const double t_hit = std::max(t + tau, std::nextafter(t, t_end));
            times.push_back(t_hit);
            points.push_back(hit);
            return {TotalPath(std::move(times), std::move(points)), false, t_hit};
        }

        times.push_back(t_next);
        points.push_back(e_next);
        cM = next;
        t = t_next;
    }
    return {TotalPath(std::move(times), std::move(points)), true, std::nullopt};
}

LiftOutcome integrate_lift(const Mechanism& l, const Config& e0, const BasePath& gamma,
                           const LiftOptions& options) {
    return integrate_lift(l, e0, SampledCurve(gamma), options);
}

}  // namespace fibersim

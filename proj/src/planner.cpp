#include "fibersim/planner.hpp"

#include "fibersim/error.hpp"

#include <cmath>
#include <exception>
#include <numbers>
#include <sstream>
#include <thread>

namespace fibersim {

std::string_view to_string(Piece p) {
    switch (p) {
        case Piece::Straight: return "Straight";
        case Piece::DetourCCW: return "DetourCCW";
        case Piece::DetourCW: return "DetourCW";
        case Piece::Degenerate: return "Degenerate";
    }
    return "Unknown";
}

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kTieTol = 1e-9;

double wrap_positive(double a) {
    double w = a - kTwoPi * std::floor(a / kTwoPi);
    if (w >= kTwoPi - 1e-12) w = 0.0;
    return w;
}

Vec2 on_circle(const Vec2& centre, double angle) {
    return centre + Vec2{std::cos(angle), std::sin(angle)} * kContactDistance;
}

double segment_distance(const Vec2& a, const Vec2& b, const Vec2& p) {
    const Vec2 ab = b - a;
    const double len2 = ab.norm2();
    const double s = len2 > 0.0 ? std::clamp((p - a).dot(ab) / len2, 0.0, 1.0) : 0.0;
    return (a + ab * s - p).norm();
}

void require_same_fiber(const Config& e, const Config& e_prime) {
    if ((e.cN - e_prime.cN).norm() > 1e-9) {
        std::ostringstream os;
        os << "base points " << e.cN << " and " << e_prime.cN << " differ";
        throw Error(ErrorCode::FiberMismatch, os.str());
    }
}

}  // namespace

FiberPlan fiber_plan(const Config& e, const Config& e_prime) {
    require_admissible(e, "start");
    require_admissible(e_prime, "goal");
    require_same_fiber(e, e_prime);

    FiberPlan plan;
    plan.start_ = e;
    plan.goal_ = e_prime;

    const Vec2 o = e.cN;
    const Vec2 a = e.cM;
    const Vec2 g = e_prime.cM;
    if (a == g) return plan;

    const double da = (a - o).norm();
    const double dg = (g - o).norm();
    const double r = kContactDistance;
    if (segment_distance(a, g, o) >= std::min({r, da, dg}) - 1e-12) {
        plan.legs_.push_back({false, a, g, 0.0, 0.0, (g - a).norm()});
        plan.length_ = plan.legs_.back().length;
        return plan;
    }

    const double theta_a = std::atan2(a.y - o.y, a.x - o.x);
    const double theta_g = std::atan2(g.y - o.y, g.x - o.x);
    const double off_a = std::acos(std::min(1.0, r / da));
    const double off_g = std::acos(std::min(1.0, r / dg));
    const double tan_a = std::sqrt(std::max(0.0, da * da - r * r));
    const double tan_g = std::sqrt(std::max(0.0, dg * dg - r * r));

    struct Detour {
        double leave, arrive, sweep, length;
    };
    auto detour = [&](double dir) {
        Detour d;
        d.leave = theta_a + dir * off_a;
        d.arrive = theta_g - dir * off_g;
        d.sweep = wrap_positive(dir * (d.arrive - d.leave));
        d.length = tan_a + r * d.sweep + tan_g;
        return d;
    };
    const Detour ccw = detour(1.0);
    const Detour cw = detour(-1.0);

    double dir = 1.0;
    const Detour* chosen = &ccw;
    if (std::abs(ccw.length - cw.length) <= kTieTol * std::max(1.0, ccw.length)) {
        plan.piece_ = Piece::Degenerate;
    } else if (ccw.length < cw.length) {
        plan.piece_ = Piece::DetourCCW;
    } else {
        plan.piece_ = Piece::DetourCW;
        chosen = &cw;
        dir = -1.0;
    }

    const Vec2 t_leave = on_circle(o, chosen->leave);
    const Vec2 t_arrive = on_circle(o, chosen->arrive);
    if (tan_a > 0.0) plan.legs_.push_back({false, a, t_leave, 0.0, 0.0, tan_a});
    if (chosen->sweep > 0.0)
        plan.legs_.push_back({true, o, o, chosen->leave, dir * chosen->sweep, r * chosen->sweep});
    if (tan_g > 0.0) plan.legs_.push_back({false, t_arrive, g, 0.0, 0.0, tan_g});
    plan.length_ = chosen->length;
    return plan;
}

Config FiberPlan::at(double s) const {
    if (s <= 0.0) return start_;
    if (s >= 1.0) return goal_;
    if (legs_.empty()) return start_;
    double remaining = s * length_;
    for (std::size_t i = 0; i < legs_.size(); ++i) {
        const Leg& leg = legs_[i];
        if (remaining <= leg.length || i + 1 == legs_.size()) {
            const double f = leg.length > 0.0 ? std::min(1.0, remaining / leg.length) : 1.0;
            const Vec2 p = leg.arc ? on_circle(leg.a, leg.angle0 + leg.sweep * f)
                                   : lerp(leg.a, leg.b, f);
            return {p, start_.cN};
        }
        remaining -= leg.length;
    }
    return goal_;
}

TotalPath FiberPlan::path(std::size_t nodes) const {
    if (nodes < 2) throw Error(ErrorCode::InvalidPath, "need at least 2 nodes");
    std::vector<Config> pts(nodes);
    for (std::size_t k = 0; k < nodes; ++k)
        pts[k] = k + 1 == nodes ? goal_ : at(static_cast<double>(k) / static_cast<double>(nodes - 1));
    return TotalPath::uniform(0.0, 1.0, std::move(pts));
}

Reparam::Reparam(std::function<double(double)> rule) : rule_(std::move(rule)) {
    if (std::abs(rule_(0.0)) > 1e-12 || std::abs(rule_(1.0) - 1.0) > 1e-12)
        throw Error(ErrorCode::InvalidParameters, "reparametrization must fix 0 and 1");
    double prev = rule_(0.0);
    for (int i = 1; i <= 100; ++i) {
        const double v = rule_(i / 100.0);
        if (v < prev) throw Error(ErrorCode::InvalidParameters, "reparametrization not monotone");
        prev = v;
    }
}

Reparam Reparam::identity() {
    return Reparam([](double s) { return s; });
}

Reparam Reparam::smoothstep() {
    return Reparam([](double s) { return s * s * (3.0 - 2.0 * s); });
}

namespace {

struct NodeResult {
    std::optional<Config> value;
    std::optional<double> collision_time;
    std::exception_ptr error;
};

}  // namespace

PlanOutcome extended_plan(const BaseCurve& gamma, const Config& e, const Config& e_prime,
                          const Mechanism& l, const Reparam& phi, const PlanOptions& options) {
    const Vec2 b0 = gamma.position(gamma.t0());
    if ((e.cN - b0).norm() > 1e-9 || (e_prime.cN - b0).norm() > 1e-9) {
        std::ostringstream os;
        os << "endpoints " << e << ", " << e_prime << " are not over gamma(t0)=" << b0;
        throw Error(ErrorCode::BasePointMismatch, os.str());
    }
    if (options.intervals < 1) throw Error(ErrorCode::InvalidParameters, "intervals must be >= 1");
    const FiberPlan plan = fiber_plan(e, e_prime);

    const std::size_t n = options.intervals;
    const double t0 = gamma.t0();
    const double t1 = gamma.t1();
    const std::size_t sub = step_count((t1 - t0) / static_cast<double>(n), options.step);

    auto node = [&](std::size_t k) {
        NodeResult out;
        if (k == 0) {
            out.value = e;
            return out;
        }
        try {
            const double s = k == n ? 1.0 : phi(static_cast<double>(k) / static_cast<double>(n));
            const Config start = plan.at(s);
            const double tk = k == n ? t1 : BasePath::uniform_node(t0, t1, k, n);
            LiftOptions lo;
            lo.step = (tk - t0) / static_cast<double>(k * sub);
            lo.t_end = tk;
            const LiftOutcome lift = integrate_lift(l, start, gamma, lo);
            if (lift.completed) out.value = lift.path.back();
            else out.collision_time = tk;
        } catch (...) {
            out.error = std::current_exception();
        }
        return out;
    };

    std::vector<NodeResult> results(n + 1);
    const unsigned threads = std::max(1u, options.threads);
    if (threads == 1) {
        for (std::size_t k = 0; k <= n; ++k) {
            results[k] = node(k);
            if (!results[k].value) break;
        }
    } else {
        std::vector<std::jthread> workers;
        for (unsigned w = 0; w < threads; ++w)
            workers.emplace_back([&, w] {
                for (std::size_t k = w; k <= n; k += threads) results[k] = node(k);
            });
    }

    PlanOutcome outcome;
    outcome.piece = plan.piece();
    for (std::size_t k = 0; k <= n; ++k) {
        if (results[k].error) std::rethrow_exception(results[k].error);
        if (!results[k].value) {
            outcome.collision_time = results[k].collision_time;
            return outcome;
        }
        outcome.times.push_back(k == n ? t1 : BasePath::uniform_node(t0, t1, k, n));
        outcome.points.push_back(*results[k].value);
        outcome.node_pieces.push_back(plan.piece());
    }
    outcome.completed = true;
    return outcome;
}

PlanOutcome moving_target_plan(const Config& e, const TotalPath& nu, const Mechanism& l,
                               const PlanOptions& options) {
    require_same_fiber(e, nu.front());

    std::vector<Vec2> base(nu.size());
    for (std::size_t k = 0; k < nu.size(); ++k) base[k] = nu[k].cN;
    const SampledCurve curve(BasePath(std::vector<double>(nu.times().begin(), nu.times().end()),
                                      std::move(base)));

    const std::size_t n = nu.size() - 1;
    const double t0 = nu.t0();
    const double span = nu.t1() - t0;

    PlanOutcome outcome;
    Config lifted = e;
    for (std::size_t k = 0; k <= n; ++k) {
        if (k > 0) {
            const RestrictedCurve piece(curve, nu.time(k - 1), nu.time(k));
            LiftOptions lo;
            lo.step = options.step;
            const LiftOutcome lift = integrate_lift(l, lifted, piece, lo);
            if (!lift.completed) {
                outcome.collision_time = lift.collision_time;
                return outcome;
            }
            lifted = lift.path.back();
        }
        const FiberPlan plan = fiber_plan(lifted, nu[k]);
        const double s = k == 0 ? 0.0 : k == n ? 1.0 : (nu.time(k) - t0) / span;
        outcome.times.push_back(nu.time(k));
        outcome.points.push_back(plan.at(s));
        outcome.node_pieces.push_back(plan.piece());
        if (k == 0) outcome.piece = plan.piece();
    }
    outcome.completed = true;
    return outcome;
}

PieceHistogram continuity_pieces(std::span<const std::pair<Config, Config>> pairs) {
    PieceHistogram h;
    for (const auto& [e, e_prime] : pairs)
        ++h.counts[static_cast<std::size_t>(fiber_plan(e, e_prime).piece())];
    return h;
}

}  // namespace fibersim

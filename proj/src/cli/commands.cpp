#include "fibersim/cli/commands.hpp"

#include "fibersim/cli/csv.hpp"
#include "fibersim/cli/scenario.hpp"
#include "fibersim/integrate.hpp"
#include "fibersim/planner.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <fstream>
#include <ostream>

namespace fibersim::cli {

using nlohmann::json;

namespace {

json vec(const Vec2& v) { return json::array({v.x, v.y}); }

json mat(const Mat2& m) { return json::array({json::array({m.a11, m.a12}), json::array({m.a21, m.a22})}); }

template <class T>
json optional_json(const std::optional<T>& v) {
    if (!v) return nullptr;
    if constexpr (std::is_same_v<T, Vec2>) return vec(*v);
    else return *v;
}

bool write_file(const std::filesystem::path& file, const Trajectory& traj, std::ostream& err) {
    std::ofstream out(file, std::ios::binary);
    if (!out) {
        err << "error: cannot write " << file.string() << '\n';
        return false;
    }
    write_csv(out, traj);
    out.flush();
    if (!out) {
        err << "error: failed writing " << file.string() << '\n';
        return false;
    }
    return true;
}

/// Runs `body`, mapping failures to exit code 1 with a diagnostic.
template <class F>
int guarded(const std::filesystem::path& source, std::ostream& err, F&& body) {
    try {
        return body();
    } catch (const ScenarioError& e) {
        err << source.string() << ": " << e.what() << '\n';
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
    }
    return kExitError;
}

Config endpoint(const std::vector<double>& values, const Vec2& cN, const char* name) {
    if (values.size() == 2) return {{values[0], values[1]}, cN};
    if (values.size() == 4) {
        const Config e{{values[0], values[1]}, {values[2], values[3]}};
        if ((e.cN - cN).norm() > 1e-9)
            throw Error(ErrorCode::FiberMismatch,
                        std::string(name) + " is not over the scenario's initial obstacle position");
        return e;
    }
    throw Error(ErrorCode::InvalidParameters, std::string(name) + " expects x,y or cMx,cMy,cNx,cNy");
}

double config_distance(const Config& a, const Config& b) {
    return std::max((a.cM - b.cM).norm(), (a.cN - b.cN).norm());
}

}  // namespace

int run_simulate(const std::filesystem::path& scenario, const std::filesystem::path& out,
                 std::ostream& err) {
    return guarded(scenario, err, [&] {
        const Scenario s = load_scenario(scenario);
        spdlog::info("simulate: mechanism {}, duration {}, step {}", s.mechanism.mechanism.name(),
                     s.duration, s.step);
        LiftOptions options;
        options.step = s.step;
        options.t_end = s.duration;
        const LiftOutcome lift = integrate_lift(s.mechanism.mechanism, s.initial, *s.obstacle, options);
        const Trajectory traj = make_trajectory(lift.path.times(), lift.path.points(), lift.collision_time);
        if (!write_file(out, traj, err)) return kExitError;
        if (lift.collision_time) {
            spdlog::info("simulate: collision at t={}", *lift.collision_time);
            return kExitCollision;
        }
        return kExitOk;
    });
}

json analysis_report(const CollisionGeometry& g) {
    json r;
    r["alpha"] = g.alpha;
    r["beta"] = g.beta;
    r["A"] = mat(g.A);
    r["B"] = mat(g.B);
    r["c0"] = vec(g.c0);
    r["cTilde0"] = optional_json(g.cTilde0);
    r["rD"] = optional_json(g.rD);
    r["rDPrime"] = optional_json(g.rDPrime);
    r["degenerate"] = g.degenerate;
    r["near_degenerate"] = g.near_degenerate;
    r["nonpositive_alpha"] = g.nonpositive_alpha;
    r["offset"] = g.degenerate ? json(g.c0.norm()) : json(nullptr);
    r["warning"] = g.warning.empty() ? json(nullptr) : json(g.warning);
    return r;
}

int run_analyze(double alpha, double beta, Vec2 cM0, Vec2 cN0, std::ostream& out,
                std::ostream& err) {
    return guarded("analyze", err, [&] {
        const CollisionGeometry g = collision_geometry(alpha, beta, cM0, cN0);
        if (!g.warning.empty()) spdlog::warn("analyze: {}", g.warning);
        out << analysis_report(g).dump(2) << '\n';
        return kExitOk;
    });
}

int run_plan(const PlanRequest& request, std::ostream& out, std::ostream& err) {
    return guarded(request.scenario, err, [&] {
        const Scenario s = load_scenario(request.scenario);
        const Config e = endpoint(request.start, s.initial.cN, "start");
        const Config goal = endpoint(request.goal, s.initial.cN, "goal");
        const RestrictedCurve gamma(*s.obstacle, 0.0, s.duration);
        const Mechanism& l = s.mechanism.mechanism;

        PlanOptions options;
        options.intervals = request.intervals;
        options.step = s.step;
        options.threads = request.threads;

        LiftOptions lift_options;
        lift_options.step = s.step;
        const LiftOutcome goal_lift = integrate_lift(l, goal, gamma, lift_options);

        PlanOutcome plan;
        std::optional<double> residual_end;
        if (request.moving_target) {
            spdlog::info("plan: moving target over {} nodes", goal_lift.path.size());
            plan = moving_target_plan(e, goal_lift.path, l, options);
            if (plan.completed) residual_end = config_distance(plan.points.back(), goal_lift.path.back());
            if (!goal_lift.completed) {
                // the target itself stops at its own collision
                plan.completed = false;
                plan.collision_time = goal_lift.collision_time;
            }
        } else {
            spdlog::info("plan: extended plan over {} intervals", options.intervals);
            plan = extended_plan(gamma, e, goal, l, Reparam::identity(), options);
            if (plan.completed && goal_lift.completed)
                residual_end = config_distance(plan.points.back(), goal_lift.path.back());
        }

        double residual_fiber = 0.0;
        for (std::size_t k = 0; k < plan.points.size(); ++k)
            residual_fiber = std::max(residual_fiber, (plan.points[k].cN - gamma.position(plan.times[k])).norm());
        const double residual_start = plan.points.empty() ? 0.0 : config_distance(plan.points.front(), e);

        const Trajectory traj = make_trajectory(plan.times, plan.points, plan.collision_time, plan.node_pieces);
        if (!write_file(request.out, traj, err)) return kExitError;

        out << "piece=" << to_string(plan.piece) << '\n';
        out << "completed=" << (plan.completed ? 1 : 0) << '\n';
        out << "residual_start=" << format_double(residual_start) << '\n';
        out << "residual_end=" << (residual_end ? format_double(*residual_end) : "nan") << '\n';
        out << "residual_fiber=" << format_double(residual_fiber) << '\n';
        if (plan.collision_time) out << "collision_time=" << format_double(*plan.collision_time) << '\n';
        return plan.completed ? kExitOk : kExitCollision;
    });
}

}  // namespace fibersim::cli

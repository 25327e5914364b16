#include "fibersim/cli/sandbox.hpp"

#include "fibersim/integrate.hpp"

#include <spdlog/spdlog.h>

namespace fibersim::cli {

using nlohmann::json;

namespace {

Vec2 message_point(const json& j, const char* key) {
    const auto it = j.find(key);
    if (it == j.end()) throw ScenarioError(key, "missing required field");
    if (!it->is_array() || it->size() != 2 || !(*it)[0].is_number() || !(*it)[1].is_number())
        throw ScenarioError(key, "expected [x, y]");
    const Vec2 p{(*it)[0].get<double>(), (*it)[1].get<double>()};
    if (!p.finite()) throw ScenarioError(key, "must be finite");
    return p;
}

double message_number(const json& j, const char* key) {
    const auto it = j.find(key);
    if (it == j.end()) throw ScenarioError(key, "missing required field");
    if (!it->is_number()) throw ScenarioError(key, "expected a number");
    const double x = it->get<double>();
    if (!std::isfinite(x)) throw ScenarioError(key, "must be finite");
    return x;
}

void only_keys(const json& j, std::initializer_list<std::string_view> keys) {
    for (const auto& [key, value] : j.items()) {
        bool known = false;
        for (auto k : keys) known = known || key == k;
        if (!known) throw ScenarioError(key, "unknown field");
    }
}

}  // namespace

SandboxSession::SandboxSession(SandboxOptions options)
    : options_(options), mechanism_(parse_mechanism(json{{"kind", "copy"}})), e_(options.initial) {
    if (!(options_.step > 0) || !std::isfinite(options_.step))
        throw Error(ErrorCode::InvalidParameters, "step must be positive");
    if (!(options_.vmax >= 0) || !std::isfinite(options_.vmax))
        throw Error(ErrorCode::InvalidParameters, "vmax must be non-negative");
    require_admissible(e_, "initial sandbox configuration");
}

std::optional<std::string> SandboxSession::handle(std::string_view message) {
    try {
        const json j = json::parse(message);
        if (!j.is_object()) throw ScenarioError("", "expected an object");
        const auto type = j.find("type");
        if (type == j.end() || !type->is_string()) throw ScenarioError("type", "missing message type");
        const std::string kind = type->get<std::string>();

        if (kind == "velocity") {
            only_keys(j, {"type", "vx", "vy"});
            Vec2 v{message_number(j, "vx"), message_number(j, "vy")};
            const double speed = v.norm();
            if (speed > options_.vmax) v = v * (options_.vmax / speed);
            v_ = v;
        } else if (kind == "mechanism") {
            only_keys(j, {"type", "spec"});
            const auto spec = j.find("spec");
            if (spec == j.end()) throw ScenarioError("spec", "missing required field");
            select(parse_mechanism(*spec, "spec"));
        } else if (kind == "reset") {
            only_keys(j, {"type", "cM", "cN"});
            const Config e{message_point(j, "cM"), message_point(j, "cN")};
            if (!is_admissible(e)) throw ScenarioError("", "reset configuration is inadmissible");
            e_ = e;
            t_ = 0.0;
            v_ = {};
            collided_ = false;
            refresh_overlays();
        } else {
            throw ScenarioError("type", "unknown message type '" + kind + "'");
        }
        spdlog::debug("sandbox: applied {}", kind);
        return std::nullopt;
    } catch (const json::exception&) {
        return error_frame("malformed JSON message");
    } catch (const std::exception& e) {
        return error_frame(e.what());
    }
}

void SandboxSession::select(MechanismSpec spec) {
    mechanism_ = std::move(spec);
    refresh_overlays();
}

void SandboxSession::refresh_overlays() {
    geometry_.reset();
    if (!mechanism_.conformal) return;
    const auto [alpha, beta] = *mechanism_.conformal;
    try {
        geometry_ = collision_geometry(alpha, beta, e_.cM, e_.cN);
    } catch (const Error& err) {
        spdlog::debug("sandbox: no overlays ({})", err.what());
    }
}

void SandboxSession::tick() {
    if (collided_) return;
    const double t1 = t_ + options_.step;
    const PolylineCurve gamma({t_, t1}, {e_.cN, e_.cN + v_ * options_.step});
    LiftOptions options;
    options.step = options_.step;
    const LiftOutcome out = integrate_lift(mechanism_.mechanism, e_, gamma, options);
    e_ = out.path.back();
    t_ = out.path.t1();
    if (!out.completed) {
        collided_ = true;
        spdlog::info("sandbox: collision at t={}", t_);
    }
}

json SandboxSession::state() const {
    auto point = [](const Vec2& p) { return json::array({p.x, p.y}); };
    json overlays{{"cTilde0", nullptr}, {"rD", nullptr}, {"rDPrime", nullptr}};
    if (geometry_ && geometry_->has_disks()) {
        overlays["cTilde0"] = point(*geometry_->cTilde0);
        overlays["rD"] = *geometry_->rD;
        overlays["rDPrime"] = *geometry_->rDPrime;
    }
    return json{{"type", "state"},
                {"t", t_},
                {"cM", point(e_.cM)},
                {"cN", point(e_.cN)},
                {"dist", e_.offset().norm()},
                {"collided", collided_},
                {"overlays", overlays}};
}

std::string SandboxSession::error_frame(const std::string& msg) {
    return json{{"type", "error"}, {"msg", msg}}.dump();
}

}  // namespace fibersim::cli

#pragma once
/**
 * @file sandbox.hpp
 * @brief Tick logic of the interactive sandbox, independent of the network.
 *
 * The session owns the configuration, the selected mechanism and the obstacle
 * velocity set by the client. Each tick advances one RK4 step of length `step`
 * with the obstacle moving at that constant velocity, which is exactly an
 * integrate_lift over the corresponding polyline. A collision freezes the
 * session until a reset.
 *
 * Client messages:
 *   {"type":"velocity","vx":f,"vy":f}
 *   {"type":"mechanism","spec":{...scenario mechanism...}}
 *   {"type":"reset","cM":[x,y],"cN":[x,y]}
 * Server frames:
 *   {"type":"state","t":f,"cM":[x,y],"cN":[x,y],"dist":f,"collided":b,
 *    "overlays":{"cTilde0":[x,y]|null,"rD":f|null,"rDPrime":f|null}}
 *   {"type":"error","msg":s}
 */

#include "fibersim/analysis.hpp"
#include "fibersim/cli/scenario.hpp"

#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

namespace fibersim::cli {

struct SandboxOptions {
    double vmax{3.0};
    double step{1.0 / 60.0};
    Config initial{{3.0, 0.0}, {0.0, 0.0}};
};

class SandboxSession {
public:
    explicit SandboxSession(SandboxOptions options = {});

    /// Applies one client message. Returns an error frame when the message is
    /// rejected; the state is then unchanged.
    std::optional<std::string> handle(std::string_view message);

    /// Advances one step (no-op while collided).
    void tick();

    nlohmann::json state() const;
    std::string state_frame() const { return state().dump(); }
    static std::string error_frame(const std::string& msg);

    double time() const { return t_; }
    const Config& config() const { return e_; }
    const Vec2& obstacle_velocity() const { return v_; }
    bool collided() const { return collided_; }
    const SandboxOptions& options() const { return options_; }

private:
    void select(MechanismSpec spec);
    void refresh_overlays();

    SandboxOptions options_;
    MechanismSpec mechanism_;
    Config e_;
    Vec2 v_;
    double t_{0.0};
    bool collided_{false};
    std::optional<CollisionGeometry> geometry_;
};

}  // namespace fibersim::cli

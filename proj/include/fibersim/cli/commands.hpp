#pragma once
/**
 * @file commands.hpp
 * @brief The batch subcommands. Each returns the process exit code:
 * 0 completed, 2 collision, 1 error (diagnostic on `err`).
 */

#include "fibersim/analysis.hpp"

#include <filesystem>
#include <iosfwd>
#include <vector>

#include <json.hpp>

namespace fibersim::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitCollision = 2;

int run_simulate(const std::filesystem::path& scenario, const std::filesystem::path& out,
                 std::ostream& err);

/// Machine-readable record of collision_geometry.
nlohmann::json analysis_report(const CollisionGeometry& g);
int run_analyze(double alpha, double beta, Vec2 cM0, Vec2 cN0, std::ostream& out,
                std::ostream& err);

struct PlanRequest {
    std::filesystem::path scenario;
    /// cM of the start and goal, or full (cM, cN) when four numbers are given.
    std::vector<double> start;
    std::vector<double> goal;
    std::filesystem::path out;
    /// Plan toward the lifted goal as a moving target instead of the extended plan.
    bool moving_target{false};
    std::size_t intervals{1000};
    unsigned threads{1};
};

/// Writes the planned trajectory with a piece column and prints the endpoint
/// and fiber residuals to `out`.
int run_plan(const PlanRequest& request, std::ostream& out, std::ostream& err);

}  // namespace fibersim::cli

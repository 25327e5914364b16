#pragma once
/**
 * @file csv.hpp
 * @brief Trajectory CSV: `t,cMx,cMy,cNx,cNy,dist,collided[,piece]`.
 *
 * Numbers are written with 17 significant digits, so parsing a file gives back
 * the in-memory doubles bitwise. A collision is reported on the last row and
 * by a trailing `# collision_time=<t>` comment.
 */

#include "fibersim/bundle.hpp"
#include "fibersim/planner.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace fibersim::cli {

struct TrajectoryRow {
    double t{0.0};
    Config e;
    double dist{0.0};
    bool collided{false};
    std::optional<Piece> piece{};
};

struct Trajectory {
    std::vector<TrajectoryRow> rows;
    std::optional<double> collision_time{};
    bool with_piece{false};
};

/// %.17g.
std::string format_double(double x);

/// Rows from parallel time and state arrays. dist is recomputed from the state;
/// `collided` marks the last row when a collision time is given.
Trajectory make_trajectory(std::span<const double> times, std::span<const Config> points,
                           std::optional<double> collision_time,
                           std::span<const Piece> pieces = {});

void write_csv(std::ostream& out, const Trajectory& traj);
/// Throws ScenarioError on a malformed file.
Trajectory read_csv(std::istream& in);

}  // namespace fibersim::cli

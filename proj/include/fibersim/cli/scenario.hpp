#pragma once
/**
 * @file scenario.hpp
 * @brief JSON scenario files: mechanism, initial configuration, obstacle motion.
 *
 * Format (version 1, unknown fields are rejected at every level):
 *
 *     {
 *       "version": 1,
 *       "mechanism": {"kind": "radial", "lambda": -0.5},
 *       "initial": {"cM": [4, 0], "cN": [0, 0]},
 *       "obstacle_path": {"kind": "constant"},
 *       "duration": 2.0,
 *       "step": 0.001,
 *       "seed": 7
 *     }
 *
 * Mechanisms: copy | damped{r_on?, r_off?} | radial{lambda} | orbit{mu} |
 * linear_const{alpha, beta} | composite{base, forms, theta?}. A composite is
 * base + sum(forms); with theta = {other, r_on?, r_off?} the base is first
 * blended as psi(d) base + (1 - psi(d)) other. Forms: pushing{r_on?, r_off?}.
 *
 * Obstacle paths: constant | spline{waypoints, speed?} |
 * random_spline{count, spacing, speed?} | polyline{knots, points} |
 * adversary{speed} (linear_const only).
 */

#include "fibersim/error.hpp"
#include "fibersim/lifting.hpp"
#include "fibersim/path.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

namespace fibersim::cli {

/// Malformed scenario or message. Carries the offending field path
/// ("mechanism.lambda") or the line and column of a syntax error.
class ScenarioError : public Error {
public:
    ScenarioError(std::string field, const std::string& msg, std::size_t line = 0,
                  std::size_t column = 0);

    const std::string& field() const { return field_; }
    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    std::string field_;
    std::size_t line_, column_;
};

struct MechanismSpec {
    nlohmann::json raw;
    Mechanism mechanism;
    /// (alpha, beta) for linear_const, which has a closed-form collision analysis.
    std::optional<std::pair<double, double>> conformal;
};

/// Parses a mechanism object; `where` prefixes field paths in diagnostics.
MechanismSpec parse_mechanism(const nlohmann::json& j, const std::string& where = "mechanism");

struct Scenario {
    MechanismSpec mechanism;
    Config initial;
    std::shared_ptr<const BaseCurve> obstacle;
    double duration{1.0};
    double step{1e-3};
    std::uint64_t seed{0};
};

Scenario parse_scenario(std::string_view text);
Scenario load_scenario(const std::filesystem::path& file);

/// Portable uniform double in [0, 1) from a 64-bit engine.
double unit_uniform(std::uint64_t bits);

}  // namespace fibersim::cli

#pragma once
/**
 * @file analysis.hpp
 * @brief Closed-form collision calculus for vM = (alpha I + beta J) vN.
 *
 * Integrating the mechanism gives cM(t) = A cN(t) - c0 with A = alpha I + beta J
 * and c0 = A cN(0) - cM(0). Away from (alpha, beta) = (1, 0) the matrix B = A - I
 * is invertible and
 *
 *     cM(t) - cN(t) = B (cN(t) - cTilde0),
 *
 * so whether the disks overlap depends only on where cN(t) sits relative to the
 * fixed point cTilde0. Collision happens iff cN lies in the exact region
 * {B^-1 x + cTilde0 : |x| < 2}, which contains the disk D of radius 2/|B| and is
 * contained in the disk D' of radius 2|B^-1|. For conformal B both radii agree.
 */

#include "fibersim/path.hpp"

#include <optional>
#include <string>

namespace fibersim {

struct CollisionGeometry {
    double alpha{1.0};
    double beta{0.0};
    Mat2 A{Mat2::identity()};
    Mat2 B{};
    Vec2 c0;
    std::optional<Vec2> cTilde0;
    std::optional<double> rD;
    std::optional<double> rDPrime;
    /// (alpha, beta) == (1, 0): offset law |cM - cN| = |c0| holds and no disks exist.
    bool degenerate{false};
    /// |B| < 1e-6: disks are not produced; see warning.
    bool near_degenerate{false};
    /// alpha <= 0 is outside the parameter range discussed for this model.
    bool nonpositive_alpha{false};
    std::string warning;

    bool has_disks() const { return rD.has_value(); }
};

inline constexpr double kNearDegenerateNorm = 1e-6;

/// Throws InvalidParameters for (0, 0) or non-finite input and
/// InadmissibleConfig when the initial disks overlap.
CollisionGeometry collision_geometry(double alpha, double beta, const Vec2& cM0, const Vec2& cN0);

enum class ObstacleClass { Collision, Admissible, Indeterminate };

std::string_view to_string(ObstacleClass c);

/// Disk test: inside D is a collision, outside the open D' is admissible.
ObstacleClass classify_obstacle_position(const CollisionGeometry& geom, const Vec2& cN);

/// |B (cN - cTilde0)| < 2. Touching is not a collision.
bool exact_collision(const CollisionGeometry& geom, const Vec2& cN);

/// A cN_t - c0; valid for the degenerate case too.
Vec2 closed_form_cM(const CollisionGeometry& geom, const Vec2& cN_t);

/// Straight constant-speed run from cN0 toward cTilde0 that ends rD/2 inside D,
/// starting at t = 0. Throws DegenerateGeometry when there are no disks.
PolylineCurve adversary_path(const CollisionGeometry& geom, const Vec2& cN0, double speed);

/// beta = 0, alpha > 0, alpha != 1: cTilde0 is on the line through cM0 and cN0
/// and |cTilde0 - cM0| = alpha |cTilde0 - cN0| (relative tolerance 1e-10).
bool collinearity_check(double alpha, const Vec2& cM0, const Vec2& cN0);

}  // namespace fibersim

#include "fibersim/analysis.hpp"

#include "fibersim/error.hpp"

#include <cmath>
#include <sstream>

namespace fibersim {

std::string_view to_string(ObstacleClass c) {
    switch (c) {
        case ObstacleClass::Collision: return "Collision";
        case ObstacleClass::Admissible: return "Admissible";
        case ObstacleClass::Indeterminate: return "Indeterminate";
    }
    return "Unknown";
}

CollisionGeometry collision_geometry(double alpha, double beta, const Vec2& cM0, const Vec2& cN0) {
    if (!std::isfinite(alpha) || !std::isfinite(beta))
        throw Error(ErrorCode::InvalidParameters, "alpha and beta must be finite");
    if (alpha == 0.0 && beta == 0.0)
        throw Error(ErrorCode::InvalidParameters, "(alpha, beta) = (0, 0) is not a mechanism");
    require_admissible(Config{cM0, cN0}, "initial configuration");

    CollisionGeometry g;
    g.alpha = alpha;
    g.beta = beta;
    g.A = conformal(alpha, beta);
    g.B = g.A - Mat2::identity();
    g.c0 = g.A * cN0 - cM0;
    g.nonpositive_alpha = alpha <= 0.0;

    if (alpha == 1.0 && beta == 0.0) {
        g.degenerate = true;
        return g;
    }
    const double norm_b = operator_norm(g.B);
    if (norm_b < kNearDegenerateNorm) {
        g.near_degenerate = true;
        std::ostringstream os;
        os << "|B| = " << norm_b << " is below " << kNearDegenerateNorm
           << "; collision disks would have radius ~" << 2.0 / norm_b << " and are not reported";
        g.warning = os.str();
        return g;
    }
    const Mat2 b_inv = inverse(g.B);
    g.cTilde0 = (Mat2::identity() + b_inv) * cN0 - b_inv * cM0;
    g.rD = 2.0 / norm_b;
    g.rDPrime = 2.0 * operator_norm(b_inv);
    return g;
}

namespace {

void require_disks(const CollisionGeometry& g) {
    if (!g.has_disks())
        throw Error(ErrorCode::DegenerateGeometry,
                    g.degenerate ? "(alpha, beta) = (1, 0) has no collision disks"
                                 : "geometry is near-degenerate: " + g.warning);
}

}  // namespace

ObstacleClass classify_obstacle_position(const CollisionGeometry& geom, const Vec2& cN) {
    require_disks(geom);
    const double d = (cN - *geom.cTilde0).norm();
    if (d < *geom.rD) return ObstacleClass::Collision;
    if (d >= *geom.rDPrime) return ObstacleClass::Admissible;
    return ObstacleClass::Indeterminate;
}

bool exact_collision(const CollisionGeometry& geom, const Vec2& cN) {
    require_disks(geom);
    return (geom.B * (cN - *geom.cTilde0)).norm() < kContactDistance;
}

Vec2 closed_form_cM(const CollisionGeometry& geom, const Vec2& cN_t) {
    return geom.A * cN_t - geom.c0;
}

PolylineCurve adversary_path(const CollisionGeometry& geom, const Vec2& cN0, double speed) {
    require_disks(geom);
    if (!(speed > 0.0) || !std::isfinite(speed))
        throw Error(ErrorCode::InvalidParameters, "adversary speed must be positive");
    const Vec2 centre = *geom.cTilde0;
    const Vec2 away = cN0 - centre;
    const double r = away.norm();
    const Vec2 target = centre + away * (0.5 * *geom.rD / r);
    const double duration = (target - cN0).norm() / speed;
    return PolylineCurve({0.0, duration}, {cN0, target});
}

bool collinearity_check(double alpha, const Vec2& cM0, const Vec2& cN0) {
    if (!(alpha > 0.0) || alpha == 1.0)
        throw Error(ErrorCode::InvalidParameters, "collinearity needs alpha > 0, alpha != 1");
    const CollisionGeometry g = collision_geometry(alpha, 0.0, cM0, cN0);
    if (!g.has_disks()) return false;
    const Vec2 to_tilde = *g.cTilde0 - cM0;
    const Vec2 to_n = cN0 - cM0;
    const double scale = to_tilde.norm() * to_n.norm();
    if (std::abs(to_tilde.cross(to_n)) > 1e-10 * scale) return false;
    const double lhs = to_tilde.norm();
    const double rhs = alpha * (*g.cTilde0 - cN0).norm();
    return std::abs(lhs - rhs) <= 1e-10 * std::max(lhs, rhs);
}

}  // namespace fibersim

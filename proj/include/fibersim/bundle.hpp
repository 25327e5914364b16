#pragma once
/**
 * @file bundle.hpp
 * @brief The fibration p: E -> B of configuration spaces.
 *
 * The canonical instance is the two-disk model: E is the set of pairs of disk
 * centres (cM, cN) at distance >= 2 (unit disks with disjoint interiors), B is the
 * plane of obstacle positions and p(cM, cN) = cN. The fiber over cN is the plane
 * with the open disk of radius 2 about cN removed.
 */

#include "fibersim/geometry.hpp"

#include <string>

namespace fibersim {

/// Band applied to the exact constraint |cM - cN| >= 2.
inline constexpr double kAdmissibilityTol = 1e-9;

/// Sum of the two unit disk radii.
inline constexpr double kContactDistance = 2.0;

/// A point of the total space: ego centre cM and obstacle centre cN.
struct Config {
    Vec2 cM;
    Vec2 cN;

    constexpr bool operator==(const Config&) const = default;
    Vec2 offset() const { return cM - cN; }
    bool finite() const { return cM.finite() && cN.finite(); }
};

std::ostream& operator<<(std::ostream& os, const Config& e);

/// Y in T_e E.
struct TotalTangent {
    Config at;
    Vec2 vM;
    Vec2 vN;
};

/// X in T_b B.
struct BaseTangent {
    Vec2 at;
    Vec2 v;
};

Vec2 project(const Config& e);
BaseTangent differential_project(const TotalTangent& y);

/// |cM - cN| - 2; zero exactly on the boundary of E.
double boundary_distance(const Config& e);

bool is_admissible(const Config& e);

/// Throws InadmissibleConfig unless boundary_distance(e) >= -kAdmissibilityTol.
void require_admissible(const Config& e, const std::string& what = "configuration");

/// Velocity admissibility at e: unconstrained in the interior, and on the
/// boundary band the separation must not decrease to first order.
bool is_admissible_velocity(const TotalTangent& y);

/// Unit vertical field pointing into E: vM = (cM - cN)/|cM - cN|, vN = 0.
TotalTangent inward_normal_field(const Config& e);

/**
 * Bundle presented by a single scalar constraint g(e) >= 0 with g = 0 on the
 * boundary. Implementations must keep project/differential_project consistent:
 * differential_project(Y).at == project(Y.at).
 */
class BundleModel {
public:
    virtual ~BundleModel() = default;

    virtual int total_dim() const = 0;
    virtual int base_dim() const = 0;
    virtual double constraint(const Config& e) const = 0;
    virtual Vec2 projection(const Config& e) const = 0;
    virtual BaseTangent differential(const TotalTangent& y) const = 0;
    virtual TotalTangent inward_normal(const Config& e) const = 0;
};

class TwoDiskBundle final : public BundleModel {
public:
    int total_dim() const override { return 4; }
    int base_dim() const override { return 2; }
    double constraint(const Config& e) const override { return boundary_distance(e); }
    Vec2 projection(const Config& e) const override { return project(e); }
    BaseTangent differential(const TotalTangent& y) const override {
        return differential_project(y);
    }
    TotalTangent inward_normal(const Config& e) const override {
        return inward_normal_field(e);
    }
};

}  // namespace fibersim

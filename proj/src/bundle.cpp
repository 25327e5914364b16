#include "fibersim/bundle.hpp"

#include "fibersim/error.hpp"

#include <sstream>

namespace fibersim {

std::ostream& operator<<(std::ostream& os, const Config& e) {
    return os << "{cM=" << e.cM << ", cN=" << e.cN << '}';
}

Vec2 project(const Config& e) { return e.cN; }

BaseTangent differential_project(const TotalTangent& y) { return {y.at.cN, y.vN}; }

double boundary_distance(const Config& e) { return e.offset().norm() - kContactDistance; }

bool is_admissible(const Config& e) {
    return e.finite() && boundary_distance(e) >= -kAdmissibilityTol;
}

void require_admissible(const Config& e, const std::string& what) {
    if (!is_admissible(e)) {
        std::ostringstream os;
        os << what << ' ' << e << " has boundary distance " << boundary_distance(e);
        throw Error(ErrorCode::InadmissibleConfig, os.str());
    }
}

bool is_admissible_velocity(const TotalTangent& y) {
    require_admissible(y.at);
    if (boundary_distance(y.at) > kAdmissibilityTol) return true;
    return (y.vM - y.vN).dot(y.at.offset()) >= -kAdmissibilityTol;
}

TotalTangent inward_normal_field(const Config& e) {
    const Vec2 c = e.offset();
    return {e, c / c.norm(), Vec2{}};
}

}  // namespace fibersim

#include "fibersim/geometry.hpp"

#include "fibersim/error.hpp"

#include <sstream>

namespace fibersim {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::SingularMatrix: return "SingularMatrix";
        case ErrorCode::InadmissibleConfig: return "InadmissibleConfig";
        case ErrorCode::InvalidParameters: return "InvalidParameters";
        case ErrorCode::BasePointMismatch: return "BasePointMismatch";
        case ErrorCode::NonFiniteState: return "NonFiniteState";
        case ErrorCode::FiberMismatch: return "FiberMismatch";
        case ErrorCode::DegenerateGeometry: return "DegenerateGeometry";
        case ErrorCode::InvalidPath: return "InvalidPath";
        case ErrorCode::MalformedScenario: return "MalformedScenario";
    }
    return "Unknown";
}

std::ostream& operator<<(std::ostream& os, const Mat2& m) {
    return os << '[' << m.a11 << ' ' << m.a12 << "; " << m.a21 << ' ' << m.a22 << ']';
}

namespace {

// Split M into a conformal part (e, h) and an anti-conformal part (f, g):
// M = [e -h; h e] + [f g; g -f]. The singular values are q + r and |q - r|.
struct SvdParts {
    double q;
    double r;
};

SvdParts svd_parts(const Mat2& m) {
    const double e = 0.5 * (m.a11 + m.a22);
    const double f = 0.5 * (m.a11 - m.a22);
    const double g = 0.5 * (m.a21 + m.a12);
    const double h = 0.5 * (m.a21 - m.a12);
    return {std::hypot(e, h), std::hypot(f, g)};
}

}  // namespace

double operator_norm(const Mat2& m) {
    const auto [q, r] = svd_parts(m);
    return q + r;
}

double min_singular_value(const Mat2& m) {
    const auto [q, r] = svd_parts(m);
    return std::abs(q - r);
}

Mat2 inverse(const Mat2& m) {
    const double d = m.det();
    if (!(std::abs(d) > kSingularDetTol)) {
        std::ostringstream os;
        os << "determinant " << d << " of " << m;
        throw Error(ErrorCode::SingularMatrix, os.str());
    }
    return {m.a22 / d, -m.a12 / d, -m.a21 / d, m.a11 / d};
}

}  // namespace fibersim

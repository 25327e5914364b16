#pragma once
/**
 * @file geometry.hpp
 * @brief Planar vectors and 2x2 operators for the two-disk model.
 *
 * Conformal matrices [a -b; b a] represent the maps v -> a v + b J v, where J is
 * the positive quarter turn. Their singular values coincide, which is what makes
 * the collision disks of the constant-coefficient analysis concentric circles.
 */

#include <cmath>
#include <ostream>

namespace fibersim {

struct Vec2 {
    double x{0.0};
    double y{0.0};

    constexpr Vec2() = default;
    constexpr Vec2(double x_, double y_) : x(x_), y(y_) {}

    constexpr Vec2 operator+(const Vec2& r) const { return {x + r.x, y + r.y}; }
    constexpr Vec2 operator-(const Vec2& r) const { return {x - r.x, y - r.y}; }
    constexpr Vec2 operator-() const { return {-x, -y}; }
    constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
    constexpr Vec2 operator/(double s) const { return {x / s, y / s}; }
    friend constexpr Vec2 operator*(double s, const Vec2& v) { return {v.x * s, v.y * s}; }

    Vec2& operator+=(const Vec2& r) { x += r.x; y += r.y; return *this; }
    Vec2& operator-=(const Vec2& r) { x -= r.x; y -= r.y; return *this; }
    Vec2& operator*=(double s) { x *= s; y *= s; return *this; }

    constexpr bool operator==(const Vec2&) const = default;

    constexpr double dot(const Vec2& r) const { return x * r.x + y * r.y; }
    /// z-component of the 3D cross product.
    constexpr double cross(const Vec2& r) const { return x * r.y - y * r.x; }
    double norm() const { return std::hypot(x, y); }
    constexpr double norm2() const { return x * x + y * y; }
    bool finite() const { return std::isfinite(x) && std::isfinite(y); }
};

inline std::ostream& operator<<(std::ostream& os, const Vec2& v) {
    return os << '(' << v.x << ", " << v.y << ')';
}

/// Positive 90 degree rotation: (x, y) -> (-y, x).
constexpr Vec2 rot90(const Vec2& v) { return {-v.y, v.x}; }

struct Mat2 {
    double a11{0.0}, a12{0.0};
    double a21{0.0}, a22{0.0};

    static constexpr Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }

    constexpr Vec2 operator*(const Vec2& v) const {
        return {a11 * v.x + a12 * v.y, a21 * v.x + a22 * v.y};
    }
    constexpr Mat2 operator*(const Mat2& m) const {
        return {a11 * m.a11 + a12 * m.a21, a11 * m.a12 + a12 * m.a22,
                a21 * m.a11 + a22 * m.a21, a21 * m.a12 + a22 * m.a22};
    }
    constexpr Mat2 operator+(const Mat2& m) const {
        return {a11 + m.a11, a12 + m.a12, a21 + m.a21, a22 + m.a22};
    }
    constexpr Mat2 operator-(const Mat2& m) const {
        return {a11 - m.a11, a12 - m.a12, a21 - m.a21, a22 - m.a22};
    }
    constexpr bool operator==(const Mat2&) const = default;

    constexpr double det() const { return a11 * a22 - a12 * a21; }
    bool finite() const {
        return std::isfinite(a11) && std::isfinite(a12) && std::isfinite(a21) &&
               std::isfinite(a22);
    }
    bool is_conformal() const { return a11 == a22 && a12 == -a21; }
};

std::ostream& operator<<(std::ostream& os, const Mat2& m);

/// [alpha -beta; beta alpha], i.e. alpha*I + beta*J.
constexpr Mat2 conformal(double alpha, double beta) { return {alpha, -beta, beta, alpha}; }

inline constexpr double kSingularDetTol = 1e-12;

/// Largest singular value, closed form.
double operator_norm(const Mat2& m);

/// Smallest singular value, closed form.
double min_singular_value(const Mat2& m);

/// Throws Error(SingularMatrix) when |det| <= 1e-12.
Mat2 inverse(const Mat2& m);

}  // namespace fibersim

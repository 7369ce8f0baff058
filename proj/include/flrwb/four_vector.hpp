#pragma once

#include <cmath>

namespace flrwb {

/// Plain spatial 3-vector (orthonormal components, or a direction on S²).
struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    constexpr Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    constexpr Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    constexpr Vec3 operator*(double c) const { return {c * x, c * y, c * z}; }
    constexpr Vec3 operator-() const { return {-x, -y, -z}; }
};

constexpr Vec3 operator*(double c, const Vec3& v) { return v * c; }

constexpr double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }

/// Covariant spatial momentum p_* = (p_1, p_2, p_3), the distribution
/// function's independent variable. Dimensionless, units m = c = 1.
struct CovariantMomentum {
    double p1 = 0.0;
    double p2 = 0.0;
    double p3 = 0.0;

    constexpr double norm2() const { return p1 * p1 + p2 * p2 + p3 * p3; }
    /// Weight function <p_*> = sqrt(1 + |p_*|^2). Distinct from the
    /// mass-shell energy, which carries the scale factor.
    double weight() const { return std::sqrt(1.0 + norm2()); }

    constexpr Vec3 vec() const { return {p1, p2, p3}; }
    static constexpr CovariantMomentum from_vec(const Vec3& v) { return {v.x, v.y, v.z}; }
};

/// Minkowski four-vector, metric signature (-,+,+,+).
struct FourVector {
    double t = 0.0;
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    constexpr Vec3 spatial() const { return {x, y, z}; }

    constexpr FourVector operator+(const FourVector& o) const {
        return {t + o.t, x + o.x, y + o.y, z + o.z};
    }
    constexpr FourVector operator-(const FourVector& o) const {
        return {t - o.t, x - o.x, y - o.y, z - o.z};
    }
    constexpr FourVector operator*(double c) const { return {c * t, c * x, c * y, c * z}; }
};

/// x_a y^a with eta = diag(-1,1,1,1).
constexpr double minkowski_dot(const FourVector& a, const FourVector& b) {
    return -a.t * b.t + a.x * b.x + a.y * b.y + a.z * b.z;
}

/// On-shell four-momentum from orthonormal spatial momentum (unit mass).
inline FourVector on_shell(const Vec3& p) {
    return {std::sqrt(1.0 + dot(p, p)), p.x, p.y, p.z};
}

/// Mass-shell defect x_a x^a + 1; zero for unit-mass momenta.
constexpr double shell_defect(const FourVector& p) { return minkowski_dot(p, p) + 1.0; }

}  // namespace flrwb

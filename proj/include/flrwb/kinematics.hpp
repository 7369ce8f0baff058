#pragma once

#include <array>
#include <optional>

#include "flrwb/four_vector.hpp"

namespace flrwb {

/// Tolerance used to validate that caller-provided four-momenta sit on the
/// unit-mass shell.
inline constexpr double kOnShellTol = 1e-9;

/// Lorentz invariants of a colliding pair: h (relative momentum) and
/// s (total energy). s = 4 + h^2 for unit masses.
struct CollisionInvariants {
    double h = 0.0;
    double s = 4.0;
};

/// Fully resolved binary collision in the orthonormal frame.
struct CollisionGeometry {
    FourVector p_hat;        // incoming momenta, on shell
    FourVector q_hat;
    Vec3 omega;              // scattering parameter on S^2
    double h = 0.0;
    double s = 4.0;
    FourVector n;            // total momentum p_hat + q_hat
    FourVector axis;         // unit spacelike axis orthogonal to n
    FourVector p_prime;      // outgoing momenta
    FourVector q_prime;
};

/// Mass-shell energy p^0 = sqrt(1 + R^-2 |p_*|^2) in covariant variables.
double mass_shell_energy(const CovariantMomentum& p_star, double scale_factor);

/// (h, s) from on-shell four-momenta. Throws std::domain_error when an
/// input is off shell beyond kOnShellTol.
CollisionInvariants collision_invariants(const FourVector& p_hat, const FourVector& q_hat);

/// Moller velocity h*sqrt(s) / (4 p^0 q^0).
double moller_velocity(const FourVector& p_hat, const FourVector& q_hat);

/// Unit spacelike four-vector orthogonal to n, obtained by boosting (0, omega)
/// out of the centre-of-momentum frame of n:
///   axis = ( (n.omega)/sqrt(s), omega + (n.omega) n / (sqrt(s)(n^0 + sqrt(s))) ).
FourVector scatter_axis(const FourVector& n, double s, const Vec3& omega);

struct PostCollision {
    FourVector p_prime;
    FourVector q_prime;
};

/// Elastic outgoing momenta p' = p + 2 (q.axis) axis, q' = q - 2 (q.axis) axis.
/// Conserves the total four-momentum and preserves the mass shell.
PostCollision post_collision(const FourVector& p_hat, const FourVector& q_hat, const Vec3& omega);

/// Convenience: full geometry (invariants, axis, outgoing momenta) in one call.
CollisionGeometry resolve_collision(const FourVector& p_hat, const FourVector& q_hat,
                                    const Vec3& omega);

struct PostCollisionCovariant {
    CovariantMomentum p_star;
    CovariantMomentum q_star;
};

/// Outgoing covariant momenta, evaluated directly in covariant variables
/// (carries the explicit R^-2 factors of the coordinate frame). Agrees with
/// mapping through the orthonormal frame p_hat = p_*/R.
PostCollisionCovariant post_collision_covariant(const CovariantMomentum& p_star,
                                                const CovariantMomentum& q_star, const Vec3& omega,
                                                double scale_factor);

/// Scattering angle in [0, pi] from sin(theta/2) = |(p-q).axis| / h.
/// Throws std::domain_error when h = 0 (angle undefined).
double scattering_angle(const FourVector& p_hat, const FourVector& q_hat, const FourVector& axis);

/// Gradient of 1/p^0 with respect to p_*: -R^-2 p_a (p^0)^-3.
Vec3 grad_inv_energy(const CovariantMomentum& p_star, double scale_factor);

using Mat3 = std::array<std::array<double, 3>, 3>;
using Mat6 = std::array<std::array<double, 6>, 6>;

/// Central finite-difference Jacobian of p_*' with respect to p_* at fixed
/// (q_*, omega, R). `reliable` compares the step against a halved step
/// (Richardson) and is cleared when the two disagree beyond rel_tol.
struct JacobianFd {
    Mat3 d_pprime_d_p{};
    double richardson_error = 0.0;
    bool reliable = true;
};

JacobianFd post_collision_jacobian_fd(const CovariantMomentum& p_star,
                                      const CovariantMomentum& q_star, const Vec3& omega,
                                      double scale_factor, double step, double rel_tol = 1e-3);

/// FD Jacobian of the full map (p_*, q_*) -> (p_*', q_*') at fixed omega.
Mat6 collision_map_jacobian_fd(const CovariantMomentum& p_star, const CovariantMomentum& q_star,
                               const Vec3& omega, double scale_factor, double step);

/// Spectral norm (largest singular value) of a 3x3 matrix.
double spectral_norm(const Mat3& m);

/// Determinant by partial-pivot elimination.
double determinant(Mat6 m);

}  // namespace flrwb

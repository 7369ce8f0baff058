#include "flrwb/kinematics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace flrwb {

namespace {

void require_finite(double v, const char* what) {
    if (!std::isfinite(v)) throw std::domain_error(std::string("non-finite ") + what);
}

void require_on_shell(const FourVector& p, const char* what) {
    require_finite(p.t, what);
    require_finite(p.x, what);
    require_finite(p.y, what);
    require_finite(p.z, what);
    if (p.t <= 0.0 || std::abs(shell_defect(p)) > kOnShellTol)
        throw std::domain_error(std::string(what) + " is off the unit mass shell");
}

}  // namespace

double mass_shell_energy(const CovariantMomentum& p_star, double scale_factor) {
    require_finite(p_star.p1, "momentum component");
    require_finite(p_star.p2, "momentum component");
    require_finite(p_star.p3, "momentum component");
    if (!(scale_factor > 0.0)) throw std::domain_error("scale factor must be positive");
    const double r2 = 1.0 / (scale_factor * scale_factor);
    return std::sqrt(1.0 + r2 * p_star.norm2());
}

CollisionInvariants collision_invariants(const FourVector& p_hat, const FourVector& q_hat) {
    require_on_shell(p_hat, "p");
    require_on_shell(q_hat, "q");
    const FourVector d = p_hat - q_hat;
    const FourVector n = p_hat + q_hat;
    const double h2 = std::max(0.0, minkowski_dot(d, d));
    const double s = -minkowski_dot(n, n);
    return {std::sqrt(h2), s};
}

double moller_velocity(const FourVector& p_hat, const FourVector& q_hat) {
    const auto inv = collision_invariants(p_hat, q_hat);
    return inv.h * std::sqrt(inv.s) / (4.0 * p_hat.t * q_hat.t);
}

FourVector scatter_axis(const FourVector& n, double s, const Vec3& omega) {
    if (!(s > 0.0)) throw std::domain_error("total energy s must be positive");
    const double rs = std::sqrt(s);
    const double n_dot_w = dot(n.spatial(), omega);
    const double c = n_dot_w / (rs * (n.t + rs));
    const Vec3 spatial = omega + c * n.spatial();
    return {n_dot_w / rs, spatial.x, spatial.y, spatial.z};
}

PostCollision post_collision(const FourVector& p_hat, const FourVector& q_hat, const Vec3& omega) {
    const auto inv = collision_invariants(p_hat, q_hat);
    const FourVector n = p_hat + q_hat;
    const FourVector axis = scatter_axis(n, inv.s, omega);
    const double q_dot_axis = minkowski_dot(q_hat, axis);
    const FourVector shift = axis * (2.0 * q_dot_axis);
    return {p_hat + shift, q_hat - shift};
}

CollisionGeometry resolve_collision(const FourVector& p_hat, const FourVector& q_hat,
                                    const Vec3& omega) {
    CollisionGeometry g;
    g.p_hat = p_hat;
    g.q_hat = q_hat;
    g.omega = omega;
    const auto inv = collision_invariants(p_hat, q_hat);
    g.h = inv.h;
    g.s = inv.s;
    g.n = p_hat + q_hat;
    g.axis = scatter_axis(g.n, g.s, omega);
    const double q_dot_axis = minkowski_dot(q_hat, g.axis);
    const FourVector shift = g.axis * (2.0 * q_dot_axis);
    g.p_prime = p_hat + shift;
    g.q_prime = q_hat - shift;
    return g;
}

PostCollisionCovariant post_collision_covariant(const CovariantMomentum& p_star,
                                                const CovariantMomentum& q_star, const Vec3& omega,
                                                double scale_factor) {
    if (!(scale_factor > 0.0)) throw std::domain_error("scale factor must be positive");
    const double R2 = scale_factor * scale_factor;
    const double p0 = mass_shell_energy(p_star, scale_factor);
    const double q0 = mass_shell_energy(q_star, scale_factor);
    const Vec3 p = p_star.vec();
    const Vec3 q = q_star.vec();
    const Vec3 nv = p + q;  // covariant components n_a
    const double n0 = p0 + q0;
    // s in covariant variables: -(n_a + ...) with g^{ab} = R^-2 delta^{ab}.
    const double s = n0 * n0 - dot(nv, nv) / R2;
    const double rs = std::sqrt(s);
    const double n_dot_w = dot(nv, omega);
    const double bracket =
        -q0 * n_dot_w / rs + dot(q, omega) + n_dot_w * (dot(nv, q) / R2) / (rs * (n0 + rs));
    const double axis_c = n_dot_w / (R2 * rs * (n0 + rs));
    const Vec3 axis_cov = omega + axis_c * nv;
    const Vec3 p_prime = p + 2.0 * bracket * axis_cov;
    const Vec3 q_prime = nv - p_prime;
    return {CovariantMomentum::from_vec(p_prime), CovariantMomentum::from_vec(q_prime)};
}

double scattering_angle(const FourVector& p_hat, const FourVector& q_hat, const FourVector& axis) {
    const auto inv = collision_invariants(p_hat, q_hat);
    if (!(inv.h > 0.0)) throw std::domain_error("scattering angle undefined for h = 0");
    const double proj = std::abs(minkowski_dot(p_hat - q_hat, axis));
    const double sin_half = std::min(1.0, proj / inv.h);
    return 2.0 * std::asin(sin_half);
}

Vec3 grad_inv_energy(const CovariantMomentum& p_star, double scale_factor) {
    const double p0 = mass_shell_energy(p_star, scale_factor);
    const double c = -1.0 / (scale_factor * scale_factor * p0 * p0 * p0);
    return {c * p_star.p1, c * p_star.p2, c * p_star.p3};
}

namespace {

Vec3 p_prime_of(const Vec3& p, const Vec3& q, const Vec3& omega, double R) {
    const auto out = post_collision_covariant(CovariantMomentum::from_vec(p),
                                              CovariantMomentum::from_vec(q), omega, R);
    return out.p_star.vec();
}

Mat3 jacobian_step(const Vec3& p, const Vec3& q, const Vec3& omega, double R, double step) {
    Mat3 j{};
    for (int a = 0; a < 3; ++a) {
        Vec3 hi = p, lo = p;
        (&hi.x)[a] += step;
        (&lo.x)[a] -= step;
        const Vec3 fp = p_prime_of(hi, q, omega, R);
        const Vec3 fm = p_prime_of(lo, q, omega, R);
        const double inv2h = 1.0 / (2.0 * step);
        j[0][a] = (fp.x - fm.x) * inv2h;
        j[1][a] = (fp.y - fm.y) * inv2h;
        j[2][a] = (fp.z - fm.z) * inv2h;
    }
    return j;
}

}  // namespace

JacobianFd post_collision_jacobian_fd(const CovariantMomentum& p_star,
                                      const CovariantMomentum& q_star, const Vec3& omega,
                                      double scale_factor, double step, double rel_tol) {
    if (!(step > 0.0)) throw std::domain_error("finite-difference step must be positive");
    JacobianFd out;
    const Vec3 p = p_star.vec();
    const Vec3 q = q_star.vec();
    out.d_pprime_d_p = jacobian_step(p, q, omega, scale_factor, step);
    const Mat3 half = jacobian_step(p, q, omega, scale_factor, 0.5 * step);
    double max_diff = 0.0, scale = 0.0;
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) {
            max_diff = std::max(max_diff, std::abs(out.d_pprime_d_p[r][c] - half[r][c]));
            scale = std::max(scale, std::abs(half[r][c]));
        }
    out.richardson_error = max_diff;
    out.reliable = max_diff <= rel_tol * std::max(1.0, scale);
    // The halved step is the better estimate; report it.
    out.d_pprime_d_p = half;
    return out;
}

Mat6 collision_map_jacobian_fd(const CovariantMomentum& p_star, const CovariantMomentum& q_star,
                               const Vec3& omega, double scale_factor, double step) {
    Mat6 j{};
    double in[6] = {p_star.p1, p_star.p2, p_star.p3, q_star.p1, q_star.p2, q_star.p3};
    for (int a = 0; a < 6; ++a) {
        double hi[6], lo[6];
        std::copy(in, in + 6, hi);
        std::copy(in, in + 6, lo);
        hi[a] += step;
        lo[a] -= step;
        const auto fp = post_collision_covariant({hi[0], hi[1], hi[2]}, {hi[3], hi[4], hi[5]},
                                                 omega, scale_factor);
        const auto fm = post_collision_covariant({lo[0], lo[1], lo[2]}, {lo[3], lo[4], lo[5]},
                                                 omega, scale_factor);
        const double outp[6] = {fp.p_star.p1, fp.p_star.p2, fp.p_star.p3,
                                fp.q_star.p1, fp.q_star.p2, fp.q_star.p3};
        const double outm[6] = {fm.p_star.p1, fm.p_star.p2, fm.p_star.p3,
                                fm.q_star.p1, fm.q_star.p2, fm.q_star.p3};
        const double inv2h = 1.0 / (2.0 * step);
        for (int r = 0; r < 6; ++r) j[r][a] = (outp[r] - outm[r]) * inv2h;
    }
    return j;
}

double spectral_norm(const Mat3& m) {
    // Largest eigenvalue of m^T m by cyclic Jacobi sweeps.
    double a[3][3];
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) {
            a[r][c] = 0.0;
            for (int k = 0; k < 3; ++k) a[r][c] += m[k][r] * m[k][c];
        }
    for (int sweep = 0; sweep < 30; ++sweep) {
        double off = std::abs(a[0][1]) + std::abs(a[0][2]) + std::abs(a[1][2]);
        if (off < 1e-15 * (std::abs(a[0][0]) + std::abs(a[1][1]) + std::abs(a[2][2]) + 1e-300))
            break;
        for (int p = 0; p < 2; ++p)
            for (int q = p + 1; q < 3; ++q) {
                if (a[p][q] == 0.0) continue;
                const double theta = 0.5 * std::atan2(2.0 * a[p][q], a[q][q] - a[p][p]);
                const double c = std::cos(theta), s = std::sin(theta);
                for (int k = 0; k < 3; ++k) {
                    const double akp = a[k][p], akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for (int k = 0; k < 3; ++k) {
                    const double apk = a[p][k], aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
    }
    const double lam = std::max({a[0][0], a[1][1], a[2][2]});
    return std::sqrt(std::max(0.0, lam));
}

double determinant(Mat6 m) {
    double det = 1.0;
    for (int col = 0; col < 6; ++col) {
        int pivot = col;
        for (int r = col + 1; r < 6; ++r)
            if (std::abs(m[r][col]) > std::abs(m[pivot][col])) pivot = r;
        if (m[pivot][col] == 0.0) return 0.0;
        if (pivot != col) {
            std::swap(m[pivot], m[col]);
            det = -det;
        }
        det *= m[col][col];
        const double inv = 1.0 / m[col][col];
        for (int r = col + 1; r < 6; ++r) {
            const double f = m[r][col] * inv;
            if (f == 0.0) continue;
            for (int c = col; c < 6; ++c) m[r][c] -= f * m[col][c];
        }
    }
    return det;
}

}  // namespace flrwb

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "flrwb/kinematics.hpp"
#include "test_util.hpp"

using namespace flrwb;
using testutil::close;
using testutil::random_direction;
using testutil::random_vec;
using testutil::u01;

namespace {
const double kSqrt2 = std::sqrt(2.0);
}

TEST_CASE("mass-shell energy") {
    CHECK(mass_shell_energy({0, 0, 0}, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(mass_shell_energy({1, 0, 0}, 1.0) == doctest::Approx(kSqrt2).epsilon(1e-15));
    // Scaling p -> R p at fixed orthonormal momentum leaves the energy fixed;
    // oracle: direct evaluation of 1 + R^-2 |p|^2.
    const double direct = std::sqrt(1.0 + (3.0 * 3.0) / (3.0 * 3.0));
    CHECK(mass_shell_energy({3, 0, 0}, 3.0) == doctest::Approx(direct).epsilon(1e-15));
    CHECK_THROWS_AS(mass_shell_energy({std::nan(""), 0, 0}, 1.0), std::domain_error);
    CHECK_THROWS_AS(mass_shell_energy({1, 0, 0}, 0.0), std::domain_error);
}

TEST_CASE("collision invariants h and s") {
    const FourVector rest{1, 0, 0, 0};
    const FourVector pa{kSqrt2, 1, 0, 0};

    SUBCASE("identical momenta") {
        const auto inv = collision_invariants(pa, pa);
        CHECK(inv.h == doctest::Approx(0.0).epsilon(1e-14));
        CHECK(inv.s == doctest::Approx(4.0).epsilon(1e-14));
    }
    SUBCASE("boosted against rest") {
        // Oracle: direct evaluation of both invariant definitions.
        const double h2_direct = -(kSqrt2 - 1.0) * (kSqrt2 - 1.0) + 1.0;
        const double s_direct = (kSqrt2 + 1.0) * (kSqrt2 + 1.0) - 1.0;
        const auto inv = collision_invariants(pa, rest);
        CHECK(inv.h * inv.h == doctest::Approx(h2_direct).epsilon(1e-13));
        CHECK(inv.s == doctest::Approx(s_direct).epsilon(1e-13));
        CHECK(inv.s - 4.0 == doctest::Approx(inv.h * inv.h).epsilon(1e-12));
        CHECK(inv.s == doctest::Approx(2.0 + 2.0 * kSqrt2).epsilon(1e-14));
    }
    SUBCASE("head-on pair") {
        const FourVector pb{kSqrt2, -1, 0, 0};
        const auto inv = collision_invariants(pa, pb);
        CHECK(inv.h == doctest::Approx(2.0).epsilon(1e-14));
        CHECK(inv.s == doctest::Approx(8.0).epsilon(1e-14));
    }
    SUBCASE("off-shell input rejected") {
        CHECK_THROWS_AS(collision_invariants({1.5, 1, 0, 0}, rest), std::domain_error);
    }
    SUBCASE("identity s = 4 + h^2 on random pairs") {
        std::mt19937_64 rng(7);
        for (int i = 0; i < 20000; ++i) {
            const auto p = on_shell(random_vec(rng, std::pow(10.0, -1 + 2 * u01(rng))));
            const auto q = on_shell(random_vec(rng, std::pow(10.0, -1 + 2 * u01(rng))));
            const auto inv = collision_invariants(p, q);
            CHECK(std::abs(inv.s - 4.0 - inv.h * inv.h) <= 1e-10 * inv.s);
        }
    }
}

TEST_CASE("Moller velocity") {
    const FourVector rest{1, 0, 0, 0};
    const FourVector pa{kSqrt2, 1, 0, 0};
    CHECK(moller_velocity(pa, pa) == doctest::Approx(0.0).epsilon(1e-14));
    // Oracle: compose the invariants with the flux formula.
    const auto inv = collision_invariants(pa, rest);
    const double expected = inv.h * std::sqrt(inv.s) / (4.0 * kSqrt2);
    CHECK(moller_velocity(pa, rest) == doctest::Approx(expected).epsilon(1e-14));

    std::mt19937_64 rng(11);
    for (int i = 0; i < 100; ++i) {
        const auto p = on_shell(random_vec(rng, 2.0));
        const auto q = on_shell(random_vec(rng, 2.0));
        CHECK(moller_velocity(p, q) == doctest::Approx(moller_velocity(q, p)).epsilon(1e-14));
        CHECK(moller_velocity(p, q) >= 0.0);
    }
}

TEST_CASE("scatter axis") {
    SUBCASE("centre of momentum") {
        std::mt19937_64 rng(3);
        for (int i = 0; i < 20; ++i) {
            const Vec3 w = random_direction(rng);
            const FourVector axis = scatter_axis({2, 0, 0, 0}, 4.0, w);
            CHECK(axis.t == doctest::Approx(0.0).epsilon(1e-15));
            CHECK(axis.x == doctest::Approx(w.x).epsilon(1e-15));
            CHECK(axis.y == doctest::Approx(w.y).epsilon(1e-15));
            CHECK(axis.z == doctest::Approx(w.z).epsilon(1e-15));
        }
    }
    const FourVector n{1.0 + kSqrt2, 1, 0, 0};
    const double s = 2.0 + 2.0 * kSqrt2;
    SUBCASE("orthogonal direction passes through") {
        const FourVector axis = scatter_axis(n, s, {0, 0, 1});
        CHECK(axis.t == doctest::Approx(0.0).epsilon(1e-15));
        CHECK(axis.z == doctest::Approx(1.0).epsilon(1e-15));
    }
    SUBCASE("aligned direction") {
        const FourVector axis = scatter_axis(n, s, {1, 0, 0});
        CHECK(axis.t == doctest::Approx(1.0 / std::sqrt(s)).epsilon(1e-14));
        CHECK(std::abs(minkowski_dot(n, axis)) <= 1e-12);
        CHECK(minkowski_dot(axis, axis) == doctest::Approx(1.0).epsilon(1e-13));
    }
    SUBCASE("unit spacelike and orthogonal on random input") {
        std::mt19937_64 rng(5);
        for (int i = 0; i < 5000; ++i) {
            const auto p = on_shell(random_vec(rng, 5.0));
            const auto q = on_shell(random_vec(rng, 5.0));
            const auto inv = collision_invariants(p, q);
            const FourVector nn = p + q;
            const FourVector axis = scatter_axis(nn, inv.s, random_direction(rng));
            CHECK(std::abs(minkowski_dot(axis, axis) - 1.0) <= 1e-12);
            CHECK(std::abs(minkowski_dot(nn, axis)) <= 1e-12);
        }
    }
    CHECK_THROWS_AS(scatter_axis(n, -1.0, {1, 0, 0}), std::domain_error);
}

TEST_CASE("post-collision momenta") {
    const FourVector rest{1, 0, 0, 0};
    const FourVector pa{kSqrt2, 1, 0, 0};

    SUBCASE("identical momenta are a fixed point") {
        const auto out = post_collision(pa, pa, {0.3, -0.6, 0.74});
        CHECK(out.p_prime.t == doctest::Approx(pa.t).epsilon(1e-14));
        CHECK(out.p_prime.x == doctest::Approx(pa.x).epsilon(1e-14));
    }
    SUBCASE("orthogonal scattering direction leaves the pair unchanged") {
        const auto out = post_collision(pa, rest, {0, 0, 1});
        CHECK(out.p_prime.x == doctest::Approx(pa.x).epsilon(1e-14));
        CHECK(out.q_prime.t == doctest::Approx(rest.t).epsilon(1e-14));
    }
    SUBCASE("head-on exchange") {
        const auto out = post_collision(pa, rest, {1, 0, 0});
        CHECK(out.p_prime.t == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(std::abs(out.p_prime.x) <= 1e-12);
        CHECK(out.q_prime.t == doctest::Approx(kSqrt2).epsilon(1e-12));
        CHECK(out.q_prime.x == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("conservation, mass shell, involution on random pairs") {
        std::mt19937_64 rng(13);
        for (int i = 0; i < 20000; ++i) {
            const auto p = on_shell(random_vec(rng, std::pow(10.0, -1 + 2.4 * u01(rng))));
            const auto q = on_shell(random_vec(rng, std::pow(10.0, -1 + 2.4 * u01(rng))));
            const Vec3 w = random_direction(rng);
            const auto out = post_collision(p, q, w);
            const FourVector d = out.p_prime + out.q_prime - (p + q);
            CHECK(std::abs(d.t) <= 1e-11);
            CHECK(std::abs(d.x) <= 1e-11);
            CHECK(std::abs(d.y) <= 1e-11);
            CHECK(std::abs(d.z) <= 1e-11);
            CHECK(std::abs(shell_defect(out.p_prime)) <= 1e-11);
            CHECK(std::abs(shell_defect(out.q_prime)) <= 1e-11);
            // Applying the map again with the same direction restores the pair.
            const auto back = post_collision(out.p_prime, out.q_prime, w);
            CHECK(std::abs(back.p_prime.x - p.x) <= 1e-10);
            CHECK(std::abs(back.p_prime.t - p.t) <= 1e-10);
            CHECK(std::abs(back.q_prime.y - q.y) <= 1e-10);
        }
    }
}

TEST_CASE("covariant post-collision agrees with the orthonormal route") {
    SUBCASE("R = 1 reduces to the orthonormal map") {
        const CovariantMomentum p{0.7, -0.2, 1.1};
        const CovariantMomentum q{-0.4, 0.9, 0.3};
        const Vec3 w{0.6, 0.0, 0.8};
        const auto cov = post_collision_covariant(p, q, w, 1.0);
        const auto ortho = post_collision(on_shell(p.vec()), on_shell(q.vec()), w);
        CHECK(cov.p_star.p1 == doctest::Approx(ortho.p_prime.x).epsilon(1e-13));
        CHECK(cov.p_star.p2 == doctest::Approx(ortho.p_prime.y).epsilon(1e-13));
        CHECK(cov.q_star.p3 == doctest::Approx(ortho.q_prime.z).epsilon(1e-13));
    }
    SUBCASE("identical momenta unchanged") {
        const CovariantMomentum p{1.5, -2.0, 0.25};
        const auto out = post_collision_covariant(p, p, {0, 1, 0}, 2.5);
        CHECK(out.p_star.p1 == doctest::Approx(p.p1).epsilon(1e-13));
        CHECK(out.q_star.p2 == doctest::Approx(p.p2).epsilon(1e-13));
    }
    SUBCASE("random configurations, both formula routes") {
        std::mt19937_64 rng(17);
        for (int i = 0; i < 20000; ++i) {
            const Vec3 pv = random_vec(rng, 4.0);
            const Vec3 qv = random_vec(rng, 4.0);
            const Vec3 w = random_direction(rng);
            const double R = std::exp(-2.0 + 4.0 * u01(rng));
            const auto cov = post_collision_covariant(CovariantMomentum::from_vec(pv),
                                                      CovariantMomentum::from_vec(qv), w, R);
            // Oracle: boost-based map composed with the frame maps p -> p/R.
            const auto ortho =
                post_collision(on_shell((1.0 / R) * pv), on_shell((1.0 / R) * qv), w);
            const double scale = std::max({1.0, std::abs(cov.p_star.p1), std::abs(cov.p_star.p2),
                                           std::abs(cov.p_star.p3)});
            CHECK(std::abs(cov.p_star.p1 - R * ortho.p_prime.x) <= 1e-12 * scale);
            CHECK(std::abs(cov.p_star.p2 - R * ortho.p_prime.y) <= 1e-12 * scale);
            CHECK(std::abs(cov.p_star.p3 - R * ortho.p_prime.z) <= 1e-12 * scale);
            CHECK(std::abs(cov.q_star.p1 - R * ortho.q_prime.x) <= 1e-12 * scale);
        }
    }
}

TEST_CASE("scattering angle") {
    const FourVector rest{1, 0, 0, 0};
    const FourVector pa{kSqrt2, 1, 0, 0};
    SUBCASE("forward") {
        const auto geo = resolve_collision(pa, rest, {0, 0, 1});
        CHECK(scattering_angle(pa, rest, geo.axis) == doctest::Approx(0.0).epsilon(1e-12));
    }
    SUBCASE("backscatter at the exchange configuration") {
        const auto geo = resolve_collision(pa, rest, {1, 0, 0});
        CHECK(scattering_angle(pa, rest, geo.axis) ==
              doctest::Approx(std::numbers::pi).epsilon(1e-10));
    }
    SUBCASE("undefined for identical momenta") {
        const auto geo = resolve_collision(pa, pa, {1, 0, 0});
        CHECK_THROWS_AS(scattering_angle(pa, pa, geo.axis), std::domain_error);
    }
    SUBCASE("range on random input") {
        std::mt19937_64 rng(19);
        for (int i = 0; i < 2000; ++i) {
            const auto p = on_shell(random_vec(rng, 3.0));
            const auto q = on_shell(random_vec(rng, 3.0));
            const auto inv = collision_invariants(p, q);
            if (inv.h < 1e-8) continue;
            const auto geo = resolve_collision(p, q, random_direction(rng));
            const double theta = scattering_angle(p, q, geo.axis);
            CHECK(theta >= 0.0);
            CHECK(theta <= std::numbers::pi + 1e-12);
        }
    }
}

TEST_CASE("gradient of the inverse energy") {
    SUBCASE("symmetry at the origin") {
        const Vec3 g = grad_inv_energy({0, 0, 0}, 1.0);
        CHECK(g.x == 0.0);
        CHECK(g.y == 0.0);
        CHECK(g.z == 0.0);
    }
    SUBCASE("unit momentum") {
        // Oracle: finite differences of 1/sqrt(1 + |p|^2).
        auto inv_e = [](double x) { return 1.0 / std::sqrt(1.0 + x * x); };
        const double h = 1e-6;
        const double fd = (inv_e(1.0 + h) - inv_e(1.0 - h)) / (2.0 * h);
        const Vec3 g = grad_inv_energy({1, 0, 0}, 1.0);
        CHECK(g.x == doctest::Approx(fd).epsilon(1e-6));
        CHECK(g.x == doctest::Approx(-std::pow(2.0, -1.5)).epsilon(1e-12));
    }
    SUBCASE("scaling relation") {
        std::mt19937_64 rng(23);
        for (int i = 0; i < 200; ++i) {
            const Vec3 pv = random_vec(rng, 3.0);
            const double R = std::exp(-1.0 + 2.0 * u01(rng));
            const Vec3 g1 = grad_inv_energy(CovariantMomentum::from_vec(pv), 1.0);
            const Vec3 gR = grad_inv_energy(CovariantMomentum::from_vec(R * pv), R);
            CHECK(gR.x == doctest::Approx(g1.x / R).epsilon(1e-12));
            CHECK(gR.y == doctest::Approx(g1.y / R).epsilon(1e-12));
            CHECK(gR.z == doctest::Approx(g1.z / R).epsilon(1e-12));
        }
    }
    SUBCASE("matches central differences on random input") {
        std::mt19937_64 rng(29);
        for (int i = 0; i < 200; ++i) {
            const Vec3 pv = random_vec(rng, 5.0);
            const double R = std::exp(-1.0 + 2.0 * u01(rng));
            const Vec3 g = grad_inv_energy(CovariantMomentum::from_vec(pv), R);
            const double h = 1e-6 * std::max(1.0, norm(pv));
            for (int a = 0; a < 3; ++a) {
                Vec3 hi = pv, lo = pv;
                (&hi.x)[a] += h;
                (&lo.x)[a] -= h;
                const double fd = (1.0 / mass_shell_energy(CovariantMomentum::from_vec(hi), R) -
                                   1.0 / mass_shell_energy(CovariantMomentum::from_vec(lo), R)) /
                                  (2.0 * h);
                CHECK(close((&g.x)[a], fd, 1e-6, 1e-12));
            }
        }
    }
}

TEST_CASE("finite-difference collision Jacobians") {
    SUBCASE("exchange configuration stays finite") {
        const auto jac = post_collision_jacobian_fd({1, 0, 0}, {0, 0, 0}, {1, 0, 0}, 1.0, 1e-5);
        CHECK(jac.reliable);
        for (const auto& row : jac.d_pprime_d_p)
            for (double v : row) CHECK(std::isfinite(v));
    }
    SUBCASE("rest pair is finite and Richardson-consistent") {
        const auto jac = post_collision_jacobian_fd({0, 0, 0}, {0, 0, 0}, {0.6, 0.8, 0.0}, 1.0,
                                                    1e-5);
        CHECK(jac.reliable);
        CHECK(std::isfinite(spectral_norm(jac.d_pprime_d_p)));
    }
    SUBCASE("no growth at large momentum") {
        const CovariantMomentum q{0.3, -0.2, 0.5};
        const Vec3 w{0.48, -0.6, 0.64};
        const Vec3 dir{0.0, 0.6, 0.8};
        const auto at = [&](double mag) {
            const auto jac = post_collision_jacobian_fd(CovariantMomentum::from_vec(mag * dir), q,
                                                        w, 1.0, 1e-5 * std::max(1.0, mag));
            return spectral_norm(jac.d_pprime_d_p);
        };
        const double base = at(1.0);
        CHECK(at(1000.0) <= 2.0 * base);
    }
    SUBCASE("volume identity for the full map") {
        std::mt19937_64 rng(31);
        for (int i = 0; i < 25; ++i) {
            const Vec3 pv = random_vec(rng, 2.0);
            const Vec3 qv = random_vec(rng, 2.0);
            const Vec3 w = random_direction(rng);
            const double R = std::exp(-1.0 + 2.0 * u01(rng));
            const CovariantMomentum p = CovariantMomentum::from_vec(pv);
            const CovariantMomentum q = CovariantMomentum::from_vec(qv);
            const double step = 1e-5 * std::max(1.0, std::max(norm(pv), norm(qv)));
            const double det = std::abs(determinant(collision_map_jacobian_fd(p, q, w, R, step)));
            const auto out = post_collision_covariant(p, q, w, R);
            const double expected = mass_shell_energy(out.p_star, R) *
                                    mass_shell_energy(out.q_star, R) /
                                    (mass_shell_energy(p, R) * mass_shell_energy(q, R));
            CHECK(close(det, expected, 1e-5));
        }
    }
}

TEST_CASE("small linear algebra helpers") {
    SUBCASE("spectral norm of a diagonal matrix") {
        Mat3 m{{{3, 0, 0}, {0, -2, 0}, {0, 0, 1}}};
        CHECK(spectral_norm(m) == doctest::Approx(3.0).epsilon(1e-12));
    }
    SUBCASE("spectral norm of a rank-one matrix") {
        // Outer product u v^T has norm |u| |v|.
        Mat3 m{{{2, 4, 4}, {1, 2, 2}, {2, 4, 4}}};  // u = (2,1,2), v = (1,2,2)
        CHECK(spectral_norm(m) == doctest::Approx(9.0).epsilon(1e-10));
    }
    SUBCASE("determinant of a permuted diagonal") {
        Mat6 m{};
        const double d[6] = {2, -3, 1, 4, -1, 5};
        for (int i = 0; i < 6; ++i) m[i][(i + 1) % 6] = d[i];
        // One cyclic permutation of 6 elements has sign -1.
        CHECK(determinant(m) == doctest::Approx(-2 * -3 * 1 * 4 * -1 * 5).epsilon(1e-12));
    }
}

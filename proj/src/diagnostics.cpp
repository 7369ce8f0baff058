#include "flrwb/diagnostics.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "flrwb/kinematics.hpp"

namespace flrwb {

double energy_density(const DistributionGrid& f, double R) {
    if (!(R > 0.0)) throw std::domain_error("scale factor must be positive");
    const double sum = f.weighted_sum([R](const CovariantMomentum& p) {
        return std::sqrt(1.0 + p.norm2() / (R * R));
    });
    return sum / (R * R * R);
}

double pressure(const DistributionGrid& f, double R) {
    if (!(R > 0.0)) throw std::domain_error("scale factor must be positive");
    const double sum = f.weighted_sum([R](const CovariantMomentum& p) {
        const double r2 = p.norm2();
        return r2 / (3.0 * std::sqrt(1.0 + r2 / (R * R)));
    });
    return sum / std::pow(R, 5);
}

double number_integral(const DistributionGrid& f) {
    return f.weighted_sum([](const CovariantMomentum&) { return 1.0; });
}

double decay_envelope(const DistributionGrid& f, double R, int k) {
    if (!(R > 0.0)) throw std::domain_error("scale factor must be positive");
    const int n = f.n();
    double best = 0.0;
    std::int64_t idx = 0;
    for (int iz = 0; iz < n; ++iz)
        for (int iy = 0; iy < n; ++iy)
            for (int ix = 0; ix < n; ++ix, ++idx) {
                const double v = f.values()[idx];
                if (v <= 0.0) continue;
                const auto p = f.node(ix, iy, iz);
                const double p0 = std::sqrt(1.0 + p.norm2() / (R * R));
                const double w = std::pow(p.weight(), k) * std::exp(0.5 * p0);
                best = std::max(best, v * w);
            }
    return best;
}

EnergyConditions energy_conditions(double rho, double P) {
    return {rho >= 0.0, std::abs(P) <= rho};
}

std::vector<double> derivative_pass(const std::vector<double>& values, int n, int axis,
                                    double delta) {
    std::vector<double> out(values.size());
    const std::int64_t stride = axis == 0 ? 1 : (axis == 1 ? n : static_cast<std::int64_t>(n) * n);
    const double inv2d = 1.0 / (2.0 * delta);
    const int nn = n;
    auto idx = [&](int ix, int iy, int iz) {
        return (static_cast<std::int64_t>(iz) * nn + iy) * nn + ix;
    };
    for (int iz = 0; iz < nn; ++iz)
        for (int iy = 0; iy < nn; ++iy)
            for (int ix = 0; ix < nn; ++ix) {
                const std::int64_t k = idx(ix, iy, iz);
                const int a = axis == 0 ? ix : (axis == 1 ? iy : iz);
                if (a == 0) {
                    out[k] = (-3.0 * values[k] + 4.0 * values[k + stride] -
                              values[k + 2 * stride]) *
                             inv2d;
                } else if (a == nn - 1) {
                    out[k] = (3.0 * values[k] - 4.0 * values[k - stride] +
                              values[k - 2 * stride]) *
                             inv2d;
                } else {
                    out[k] = (values[k + stride] - values[k - stride]) * inv2d;
                }
            }
    return out;
}

double weighted_norm(const DistributionGrid& f, const NormSpec& spec, double R) {
    if (!(R > 0.0)) throw std::domain_error("scale factor must be positive");
    if (spec.k < 0 || spec.N < 0) throw std::invalid_argument("norm orders must be nonnegative");
    const int n = f.n();
    const double p0_max = std::sqrt(1.0 + 3.0 * f.extent() * f.extent() / (R * R));
    if (p0_max > 700.0)
        throw std::domain_error("e^{p0} overflows for this extent and scale factor");

    // Pointwise weight <p>^{2k} e^{p0}.
    std::vector<double> w(static_cast<std::size_t>(f.size()));
    {
        std::int64_t idx = 0;
        for (int iz = 0; iz < n; ++iz)
            for (int iy = 0; iy < n; ++iy)
                for (int ix = 0; ix < n; ++ix, ++idx) {
                    const auto p = f.node(ix, iy, iz);
                    const double p0 = std::sqrt(1.0 + p.norm2() / (R * R));
                    w[idx] = std::pow(1.0 + p.norm2(), spec.k) * std::exp(p0);
                }
    }

    double total = 0.0;
    // All multi-indices (i,j,k) with i+j+k <= N, derivatives composed
    // axis-by-axis.
    for (int i = 0; i + 0 <= spec.N; ++i)
        for (int j = 0; i + j <= spec.N; ++j)
            for (int l = 0; i + j + l <= spec.N; ++l) {
                std::vector<double> d = f.values();
                for (int r = 0; r < i; ++r) d = derivative_pass(d, n, 0, f.delta());
                for (int r = 0; r < j; ++r) d = derivative_pass(d, n, 1, f.delta());
                for (int r = 0; r < l; ++r) d = derivative_pass(d, n, 2, f.delta());
                double acc = 0.0;
                for (std::size_t kk = 0; kk < d.size(); ++kk) acc += w[kk] * d[kk] * d[kk];
                total += acc;
            }
    return std::sqrt(total * f.cell_volume());
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol,
                        int max_depth) {
    struct Impl {
        const std::function<double(double)>& f;
        double tol;
        double recurse(double a, double m, double b, double fa, double fm, double fb, double whole,
                       double eps, int depth) {
            const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
            const double flm = f(lm), frm = f(rm);
            const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
            const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
            const double diff = left + right - whole;
            if (depth <= 0 || std::abs(diff) <= 15.0 * eps) return left + right + diff / 15.0;
            return recurse(a, lm, m, fa, flm, fm, left, 0.5 * eps, depth - 1) +
                   recurse(m, rm, b, fm, frm, fb, right, 0.5 * eps, depth - 1);
        }
    };
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    Impl impl{f, tol};
    return impl.recurse(a, m, b, fa, fm, fb, whole, tol, max_depth);
}

double moment_ratio_audit(double R, int m) {
    if (!(R > 0.0)) throw std::domain_error("scale factor must be positive");
    if (m < -2 || m > 10) throw std::invalid_argument("moment order out of range [-2, 10]");
    auto integrand = [R, m](double r) {
        const double p0 = std::sqrt(1.0 + r * r / (R * R));
        return r * r * std::pow(p0, m) * std::exp(-p0);
    };
    const double r_max = R * (80.0 + 10.0 * std::abs(m));
    const double integral =
        4.0 * std::numbers::pi * adaptive_simpson(integrand, 0.0, r_max, 1e-13);
    return integral / (R * R * R);
}

namespace {
inline double u01(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1.0p-53; }
}  // namespace

WeightTransferAudit weight_transfer_audit(std::int64_t samples, std::uint64_t seed) {
    if (samples < 10000) throw std::invalid_argument("weight-transfer audit needs >= 1e4 samples");
    std::mt19937_64 rng(seed);
    auto direction = [&]() {
        const double cz = 1.0 - 2.0 * u01(rng());
        const double phi = 2.0 * std::numbers::pi * u01(rng());
        const double sz = std::sqrt(std::max(0.0, 1.0 - cz * cz));
        return Vec3{sz * std::cos(phi), sz * std::sin(phi), cz};
    };
    auto magnitude = [&]() {
        // Half log-spaced across six decades, half uniform up to the cap.
        if (u01(rng()) < 0.5) return std::pow(10.0, -3.0 + 6.0 * u01(rng()));
        return 1000.0 * u01(rng());
    };
    WeightTransferAudit out;
    for (std::int64_t k = 0; k < samples; ++k) {
        const double R = std::exp(-3.0 + 6.0 * u01(rng()));
        const Vec3 p = magnitude() * direction();
        const Vec3 q = magnitude() * direction();
        const Vec3 omega = direction();
        const auto post = post_collision_covariant(CovariantMomentum::from_vec(p),
                                                   CovariantMomentum::from_vec(q), omega, R);
        const double num = 1.0 + dot(p, p);
        const double den = (1.0 + post.p_star.norm2()) * (1.0 + post.q_star.norm2());
        const double ratio = num / den;
        if (ratio > out.max_ratio) {
            out.max_ratio = ratio;
            out.at_p_norm = norm(p);
            out.at_R = R;
        }
    }
    return out;
}

}  // namespace flrwb

#pragma once

#include <cstdint>
#include <vector>

#include "flrwb/distribution_grid.hpp"
#include "flrwb/sphere_quadrature.hpp"

namespace flrwb {

/// Integrand weight of the gain/loss integrals, 1/(p0 q0 sqrt(s)). Equals
/// the Moller velocity times the constant-angle scattering kernel 4/(h s);
/// the h factors cancel, so there is no singularity at h = 0.
double kernel_weight(double p0, double q0, double s);

/// One full evaluation of the collision operator over the lattice.
/// Q(f,f)(p) = gain[p] - f[p] * loss_coeff[p].
struct QEvaluation {
    std::vector<double> gain;
    std::vector<double> loss_coeff;
    std::uint64_t leakage = 0;
};

/// Number and energy moments of a gain/loss evaluation (comoving measure).
struct MomentBalance {
    double number_gain = 0.0;
    double number_loss = 0.0;
    double energy_gain = 0.0;
    double energy_loss = 0.0;
};

/// Deterministic sphere x lattice quadrature of the gain and loss integrals.
/// Pure reader of the grid; evaluations parallelize over pair rows with a
/// fixed merge order (bit-reproducible at fixed worker count).
class CollisionOperator {
  public:
    explicit CollisionOperator(SphereQuadrature quad);

    const SphereQuadrature& quadrature() const { return quad_; }

    QEvaluation evaluate(const DistributionGrid& f, double scale_factor) const;

    /// Single lattice point (full q sum, including q = p).
    double gain(const DistributionGrid& f, int ix, int iy, int iz, double scale_factor) const;
    double loss_rate(const DistributionGrid& f, int ix, int iy, int iz, double scale_factor) const;

    struct PointQ {
        double gain = 0.0;
        double loss_coeff = 0.0;
        std::uint64_t leak = 0;
    };
    /// Arbitrary evaluation point in covariant momentum.
    PointQ at_point(const DistributionGrid& f, const CovariantMomentum& p,
                    double scale_factor) const;

    struct McResult {
        double gain = 0.0;
        double loss = 0.0;  // Q_-(p) = f(p) * loss coefficient
        double stderr_gain = 0.0;
        double stderr_loss = 0.0;
    };
    /// Monte Carlo oracle: q uniform over the cube, omega uniform on S^2.
    /// Independent of the deterministic quadrature path; reproducible per
    /// seed.
    static McResult mc_estimate(const DistributionGrid& f, const CovariantMomentum& p,
                                double scale_factor, std::int64_t n_samples, std::uint64_t seed);

  private:
    SphereQuadrature quad_;
};

MomentBalance collision_moments(const DistributionGrid& f, const QEvaluation& q,
                                double scale_factor);

}  // namespace flrwb

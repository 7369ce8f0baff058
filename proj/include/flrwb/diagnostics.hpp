#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "flrwb/distribution_grid.hpp"

namespace flrwb {

/// Weighted-norm parameters: polynomial weight exponent k and maximum
/// derivative order N.
struct NormSpec {
    int k = 0;
    int N = 0;
};

/// Per-record observables of a run.
struct DiagnosticsRecord {
    double t = 0.0;
    double R = 1.0;
    double rho = 0.0;
    double P = 0.0;
    double number_integral = 0.0;
    std::vector<double> norms;
    double decay_envelope = 0.0;
    double leakage = 0.0;
    double continuity_residual = 0.0;
};

/// Weighted lattice norm: sqrt of
///   sum_{|beta| <= N} sum_lattice <p>^{2k} e^{p0(R)} |d_beta f|^2 delta^3,
/// with derivatives by centered differences (second-order one-sided stencils
/// at the cube boundary). Throws when e^{p0} would overflow.
double weighted_norm(const DistributionGrid& f, const NormSpec& spec, double scale_factor);

/// rho = R^-3 sum f p0 delta^3.
double energy_density(const DistributionGrid& f, double scale_factor);

/// P = R^-5 sum f |p_*|^2 / (3 p0) delta^3. Satisfies 3P <= rho.
double pressure(const DistributionGrid& f, double scale_factor);

/// Comoving number integral sum f delta^3.
double number_integral(const DistributionGrid& f);

/// max over the lattice of f * <p>^k * e^{p0(R)/2}; bounded in time for
/// small data, which certifies the pointwise decay of the distribution.
double decay_envelope(const DistributionGrid& f, double scale_factor, int k);

struct EnergyConditions {
    bool weak = true;      // rho >= 0
    bool dominant = true;  // |P| <= rho
};
EnergyConditions energy_conditions(double rho, double P);

/// Recursive adaptive Simpson quadrature on [a, b].
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-12, int max_depth = 40);

/// Ratio of the momentum-space integral of (p0)^m e^{-p0} to R^3, computed
/// by adaptive radial quadrature. Substituting z = p_*/R shows the ratio is
/// R-independent in the continuum; the audit checks that numerically.
double moment_ratio_audit(double scale_factor, int m);

/// Max over sampled collisions of (1+|p_*|^2) / ((1+|p_*'|^2)(1+|q_*'|^2)),
/// scanning |p_*| up to 1e3 and R in [e^-3, e^3]. Bounded by 17.
struct WeightTransferAudit {
    double max_ratio = 0.0;
    double at_p_norm = 0.0;
    double at_R = 1.0;
};
WeightTransferAudit weight_transfer_audit(std::int64_t samples, std::uint64_t seed);

/// Derivative lattice by one centered-difference pass along an axis (0,1,2).
std::vector<double> derivative_pass(const std::vector<double>& values, int n, int axis,
                                    double delta);

}  // namespace flrwb

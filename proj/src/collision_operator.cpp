#include "flrwb/collision_operator.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "flrwb/collision_kernels.hpp"
#include "flrwb/kinematics.hpp"
#include "flrwb/parallel.hpp"

namespace flrwb {

double kernel_weight(double p0, double q0, double s) {
    if (!(p0 >= 1.0) || !(q0 >= 1.0)) throw std::domain_error("energies must be >= 1");
    if (!(s >= 4.0 * (1.0 - 1e-12))) throw std::domain_error("total energy s must be >= 4");
    return 1.0 / (p0 * q0 * std::sqrt(s));
}

CollisionOperator::CollisionOperator(SphereQuadrature quad) : quad_(std::move(quad)) {}

namespace {

/// Owning storage behind kernels::EvalTables.
struct Tables {
    std::vector<double> axis_hat;
    std::vector<double> energy;
    std::vector<double> fpad;
    std::vector<double> wx, wy, wz, ww;
    kernels::EvalTables view;
};

Tables build_tables(const DistributionGrid& f, double R, const SphereQuadrature& quad) {
    if (!(R > 0.0)) throw std::domain_error("scale factor must be positive");
    Tables t;
    const int n = f.n();
    const std::int64_t N = f.size();
    t.axis_hat.resize(n);
    for (int i = 0; i < n; ++i) t.axis_hat[i] = f.coord(i) / R;
    t.energy.resize(N);
    {
        std::int64_t k = 0;
        for (int iz = 0; iz < n; ++iz)
            for (int iy = 0; iy < n; ++iy)
                for (int ix = 0; ix < n; ++ix, ++k) {
                    const double hx = t.axis_hat[ix], hy = t.axis_hat[iy], hz = t.axis_hat[iz];
                    t.energy[k] = std::sqrt(1.0 + (hx * hx + hy * hy + hz * hz));
                }
    }
    const int np = n + 2;
    t.fpad.assign(static_cast<std::size_t>(np) * np * np, 0.0);
    for (int iz = 0; iz < n; ++iz)
        for (int iy = 0; iy < n; ++iy) {
            const double* src = f.values().data() + f.index(0, iy, iz);
            double* dst =
                t.fpad.data() + ((static_cast<std::int64_t>(iz) + 1) * np + (iy + 1)) * np + 1;
            for (int ix = 0; ix < n; ++ix) dst[ix] = src[ix];
        }
    const int m = quad.folded_size();
    const int m_padded = (m + 3) / 4 * 4;
    t.wx.assign(m_padded, 0.0);
    t.wy.assign(m_padded, 0.0);
    t.wz.assign(m_padded, 1.0);  // pads point along z with zero weight
    t.ww.assign(m_padded, 0.0);
    for (int k = 0; k < m; ++k) {
        t.wx[k] = quad.fx()[k];
        t.wy[k] = quad.fy()[k];
        t.wz[k] = quad.fz()[k];
        t.ww[k] = quad.fw()[k];
    }

    t.view.n = n;
    t.view.size = N;
    t.view.disp = 2.0 * R / f.delta();
    t.view.lo = -0.5;
    t.view.hi = n - 0.5;
    t.view.axis_hat = t.axis_hat.data();
    t.view.energy = t.energy.data();
    t.view.f = f.values().data();
    t.view.fpad = t.fpad.data();
    t.view.m = m;
    t.view.m_padded = m_padded;
    t.view.wx = t.wx.data();
    t.view.wy = t.wy.data();
    t.view.wz = t.wz.data();
    t.view.ww = t.ww.data();
    return t;
}

/// K at the diagonal q = p, via the same arithmetic as the kernels.
double diagonal_kernel(double px, double py, double pz, double pe) {
    const double peqe = pe * pe;
    const double dot_pp = (px * px + py * py) + pz * pz;
    const double s = 2.0 + 2.0 * peqe - 2.0 * dot_pp;
    return 1.0 / (std::sqrt(s) * peqe);
}

}  // namespace

QEvaluation CollisionOperator::evaluate(const DistributionGrid& f, double scale_factor) const {
    const Tables t = build_tables(f, scale_factor, quad_);
    const std::int64_t N = f.size();
    const int workers = worker_count();
    const auto parts = partition_pair_rows(N, workers);
    const auto pass = kernels::select_pair_pass();

    std::vector<std::vector<double>> gains(parts.size()), losses(parts.size());
    std::vector<std::uint64_t> leaks(parts.size(), 0);
    for (auto& g : gains) g.assign(N, 0.0);
    for (auto& l : losses) l.assign(N, 0.0);

    run_parts(parts, [&](int part, std::int64_t begin, std::int64_t end) {
        pass(t.view, begin, end, gains[part].data(), losses[part].data(), &leaks[part]);
    });

    QEvaluation out;
    out.gain.assign(N, 0.0);
    out.loss_coeff.assign(N, 0.0);
    for (std::size_t part = 0; part < parts.size(); ++part) {
        for (std::int64_t k = 0; k < N; ++k) {
            out.gain[k] += gains[part][k];
            out.loss_coeff[k] += losses[part][k];
        }
        out.leakage += leaks[part];
    }

    // Diagonal q = p: the outgoing pair is the incoming pair, so the product
    // is f^2 and the sphere integral is just the total weight.
    const double wsum = quad_.weight_sum();
    const int n = f.n();
    {
        std::int64_t k = 0;
        for (int iz = 0; iz < n; ++iz)
            for (int iy = 0; iy < n; ++iy)
                for (int ix = 0; ix < n; ++ix, ++k) {
                    const double K = diagonal_kernel(t.axis_hat[ix], t.axis_hat[iy],
                                                     t.axis_hat[iz], t.energy[k]);
                    const double fk = f.values()[k];
                    out.gain[k] += K * wsum * fk * fk;
                    out.loss_coeff[k] += K * fk;
                }
    }

    const double scale = f.cell_volume() / (scale_factor * scale_factor * scale_factor);
    for (std::int64_t k = 0; k < N; ++k) {
        out.gain[k] *= scale;
        out.loss_coeff[k] *= scale * wsum;
    }
    return out;
}

CollisionOperator::PointQ CollisionOperator::at_point(const DistributionGrid& f,
                                                      const CovariantMomentum& p,
                                                      double scale_factor) const {
    const Tables t = build_tables(f, scale_factor, quad_);
    const double px = p.p1 / scale_factor, py = p.p2 / scale_factor, pz = p.p3 / scale_factor;
    const double pe = std::sqrt(1.0 + (px * px + py * py + pz * pz));
    const double inv_d = 1.0 / f.delta();
    const double pux = (p.p1 + f.extent()) * inv_d - 0.5;
    const double puy = (p.p2 + f.extent()) * inv_d - 0.5;
    const double puz = (p.p3 + f.extent()) * inv_d - 0.5;
    const auto sums = kernels::point_pass_scalar(t.view, px, py, pz, pe, pux, puy, puz);
    const double scale = f.cell_volume() / (scale_factor * scale_factor * scale_factor);
    PointQ out;
    out.gain = scale * sums.gain_raw;
    out.loss_coeff = scale * quad_.weight_sum() * sums.loss_raw;
    out.leak = sums.leak;
    return out;
}

double CollisionOperator::gain(const DistributionGrid& f, int ix, int iy, int iz,
                               double scale_factor) const {
    return at_point(f, f.node(ix, iy, iz), scale_factor).gain;
}

double CollisionOperator::loss_rate(const DistributionGrid& f, int ix, int iy, int iz,
                                    double scale_factor) const {
    return at_point(f, f.node(ix, iy, iz), scale_factor).loss_coeff;
}

namespace {

/// 53-bit uniform in [0, 1) from a raw 64-bit draw; keeps the Monte Carlo
/// stream independent of library distribution internals.
inline double u01(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

}  // namespace

CollisionOperator::McResult CollisionOperator::mc_estimate(const DistributionGrid& f,
                                                           const CovariantMomentum& p,
                                                           double scale_factor,
                                                           std::int64_t n_samples,
                                                           std::uint64_t seed) {
    if (n_samples < 1000) throw std::invalid_argument("mc_estimate needs at least 1000 samples");
    std::mt19937_64 rng(seed);
    const double R = scale_factor;
    const double P = f.extent();
    const double volume = 8.0 * P * P * P;
    const double four_pi = 4.0 * std::numbers::pi;
    const double norm = volume * four_pi / (R * R * R);

    const Vec3 p_hat = {p.p1 / R, p.p2 / R, p.p3 / R};
    const FourVector p4 = on_shell(p_hat);
    const double fp_here = f.sample(p);

    double sum_g = 0.0, sum_g2 = 0.0, sum_l = 0.0, sum_l2 = 0.0;
    for (std::int64_t k = 0; k < n_samples; ++k) {
        const CovariantMomentum q = {P * (2.0 * u01(rng()) - 1.0), P * (2.0 * u01(rng()) - 1.0),
                                     P * (2.0 * u01(rng()) - 1.0)};
        const double cz = 1.0 - 2.0 * u01(rng());
        const double phi = 2.0 * std::numbers::pi * u01(rng());
        const double sz = std::sqrt(std::max(0.0, 1.0 - cz * cz));
        const Vec3 omega = {sz * std::cos(phi), sz * std::sin(phi), cz};

        const FourVector q4 = on_shell({q.p1 / R, q.p2 / R, q.p3 / R});
        const auto inv = collision_invariants(p4, q4);
        const double K = kernel_weight(p4.t, q4.t, inv.s);
        const auto post = post_collision(p4, q4, omega);
        const CovariantMomentum pp = {R * post.p_prime.x, R * post.p_prime.y, R * post.p_prime.z};
        const CovariantMomentum qp = {R * post.q_prime.x, R * post.q_prime.y, R * post.q_prime.z};

        const double g = K * f.sample(pp) * f.sample(qp);
        const double l = K * f.sample(q);
        sum_g += g;
        sum_g2 += g * g;
        sum_l += l;
        sum_l2 += l * l;
    }
    const double M = static_cast<double>(n_samples);
    const double mean_g = sum_g / M;
    const double mean_l = sum_l / M;
    const double var_g = std::max(0.0, sum_g2 / M - mean_g * mean_g);
    const double var_l = std::max(0.0, sum_l2 / M - mean_l * mean_l);
    McResult out;
    out.gain = norm * mean_g;
    out.stderr_gain = norm * std::sqrt(var_g / M);
    out.loss = fp_here * norm * mean_l;
    out.stderr_loss = fp_here * norm * std::sqrt(var_l / M);
    return out;
}

MomentBalance collision_moments(const DistributionGrid& f, const QEvaluation& q,
                                double scale_factor) {
    MomentBalance m;
    const int n = f.n();
    const double dv = f.cell_volume();
    std::int64_t k = 0;
    for (int iz = 0; iz < n; ++iz)
        for (int iy = 0; iy < n; ++iy)
            for (int ix = 0; ix < n; ++ix, ++k) {
                const double e = mass_shell_energy(f.node(ix, iy, iz), scale_factor);
                const double g = q.gain[k];
                const double l = f.values()[k] * q.loss_coeff[k];
                m.number_gain += g;
                m.number_loss += l;
                m.energy_gain += e * g;
                m.energy_loss += e * l;
            }
    m.number_gain *= dv;
    m.number_loss *= dv;
    m.energy_gain *= dv;
    m.energy_loss *= dv;
    return m;
}

}  // namespace flrwb

#include <cmath>

#include "flrwb/collision_kernels.hpp"

namespace flrwb::kernels {

namespace {

// Trilinear read from the ghost-padded array, in lattice units. The caller
// guarantees u within [-0.5, n - 0.5] on every axis, so the 8 corners fall
// inside the padded block.
inline double interp(const EvalTables& t, double ux, double uy, double uz) {
    const int kx = static_cast<int>(std::floor(ux));
    const int ky = static_cast<int>(std::floor(uy));
    const int kz = static_cast<int>(std::floor(uz));
    const double fx = ux - kx, fy = uy - ky, fz = uz - kz;
    const int np = t.n + 2;
    const std::int64_t sy = np;
    const std::int64_t sz = static_cast<std::int64_t>(np) * np;
    const double* c = t.fpad + ((static_cast<std::int64_t>(kz) + 1) * np + (ky + 1)) * np +
                      (kx + 1);
    const double c00 = c[0] + fx * (c[1] - c[0]);
    const double c10 = c[sy] + fx * (c[sy + 1] - c[sy]);
    const double c01 = c[sz] + fx * (c[sz + 1] - c[sz]);
    const double c11 = c[sz + sy] + fx * (c[sz + sy + 1] - c[sz + sy]);
    const double d0 = c00 + fy * (c10 - c00);
    const double d1 = c01 + fy * (c11 - c01);
    return d0 + fz * (d1 - d0);
}

struct PairGeometry {
    double K;        // 1/(p0 q0 sqrt(s))
    double B;        // coefficient of (n.w) in q.axis
    double C;        // coefficient of (n.w) n in the axis spatial part
    double nx, ny, nz;
};

inline PairGeometry pair_geometry(double px, double py, double pz, double pe, double qx, double qy,
                                  double qz, double qe) {
    PairGeometry g;
    const double peqe = pe * qe;
    const double dot_pq = (px * qx + py * qy) + pz * qz;
    const double s = 2.0 + 2.0 * peqe - 2.0 * dot_pq;
    const double rs = std::sqrt(s);
    const double inv_rs = 1.0 / rs;
    g.K = inv_rs / peqe;
    g.nx = px + qx;
    g.ny = py + qy;
    g.nz = pz + qz;
    const double n0 = pe + qe;
    const double ndq = (g.nx * qx + g.ny * qy) + g.nz * qz;
    const double invden = 1.0 / (rs * (n0 + rs));
    g.B = ndq * invden - qe * inv_rs;
    g.C = invden;
    return g;
}

}  // namespace

void pair_pass_scalar(const EvalTables& t, std::int64_t row_begin, std::int64_t row_end,
                      double* gain_raw, double* loss_raw, std::uint64_t* leak) {
    const int n = t.n;
    std::uint64_t leaked = 0;
    for (std::int64_t i = row_begin; i < row_end; ++i) {
        const int ix = static_cast<int>(i % n);
        const int iy = static_cast<int>((i / n) % n);
        const int iz = static_cast<int>(i / (static_cast<std::int64_t>(n) * n));
        const double px = t.axis_hat[ix], py = t.axis_hat[iy], pz = t.axis_hat[iz];
        const double pe = t.energy[i];
        const double fi = t.f[i];
        const double uix = ix, uiy = iy, uiz = iz;
        double gain_i = 0.0, loss_i = 0.0;

        int jx = ix, jy = iy, jz = iz;
        for (std::int64_t j = i + 1; j < t.size; ++j) {
            if (++jx == n) {
                jx = 0;
                if (++jy == n) {
                    jy = 0;
                    ++jz;
                }
            }
            const double qx = t.axis_hat[jx], qy = t.axis_hat[jy], qz = t.axis_hat[jz];
            const double qe = t.energy[j];
            const auto g = pair_geometry(px, py, pz, pe, qx, qy, qz, qe);

            loss_i += g.K * t.f[j];
            loss_raw[j] += g.K * fi;

            double acc = 0.0;
            for (int k = 0; k < t.m; ++k) {
                const double wxk = t.wx[k], wyk = t.wy[k], wzk = t.wz[k];
                const double t1 = (g.nx * wxk + g.ny * wyk) + g.nz * wzk;
                const double t2 = (qx * wxk + qy * wyk) + qz * wzk;
                const double c = t2 + g.B * t1;
                const double d = t.disp * c;
                const double e = g.C * t1;
                const double sx = d * (wxk + e * g.nx);
                const double sy = d * (wyk + e * g.ny);
                const double sz = d * (wzk + e * g.nz);
                const double upx = uix + sx, upy = uiy + sy, upz = uiz + sz;
                const double uqx = jx - sx, uqy = jy - sy, uqz = jz - sz;
                const bool in_p = upx >= t.lo && upx <= t.hi && upy >= t.lo && upy <= t.hi &&
                                  upz >= t.lo && upz <= t.hi;
                const bool in_q = uqx >= t.lo && uqx <= t.hi && uqy >= t.lo && uqy <= t.hi &&
                                  uqz >= t.lo && uqz <= t.hi;
                leaked += static_cast<std::uint64_t>(!in_p) + static_cast<std::uint64_t>(!in_q);
                if (in_p && in_q) {
                    const double fp = interp(t, upx, upy, upz);
                    const double fq = interp(t, uqx, uqy, uqz);
                    acc += t.ww[k] * (fp * fq);
                }
            }
            gain_i += g.K * acc;
            gain_raw[j] += g.K * acc;
        }
        gain_raw[i] += gain_i;
        loss_raw[i] += loss_i;
    }
    *leak += leaked;
}

PointSums point_pass_scalar(const EvalTables& t, double px, double py, double pz, double pe,
                            double pux, double puy, double puz) {
    const int n = t.n;
    PointSums out;
    std::int64_t j = 0;
    for (int jz = 0; jz < n; ++jz)
        for (int jy = 0; jy < n; ++jy)
            for (int jx = 0; jx < n; ++jx, ++j) {
                const double qx = t.axis_hat[jx], qy = t.axis_hat[jy], qz = t.axis_hat[jz];
                const double qe = t.energy[j];
                const auto g = pair_geometry(px, py, pz, pe, qx, qy, qz, qe);
                out.loss_raw += g.K * t.f[j];
                double acc = 0.0;
                for (int k = 0; k < t.m; ++k) {
                    const double wxk = t.wx[k], wyk = t.wy[k], wzk = t.wz[k];
                    const double t1 = (g.nx * wxk + g.ny * wyk) + g.nz * wzk;
                    const double t2 = (qx * wxk + qy * wyk) + qz * wzk;
                    const double c = t2 + g.B * t1;
                    const double d = t.disp * c;
                    const double e = g.C * t1;
                    const double sx = d * (wxk + e * g.nx);
                    const double sy = d * (wyk + e * g.ny);
                    const double sz = d * (wzk + e * g.nz);
                    const double upx = pux + sx, upy = puy + sy, upz = puz + sz;
                    const double uqx = jx - sx, uqy = jy - sy, uqz = jz - sz;
                    const bool in_p = upx >= t.lo && upx <= t.hi && upy >= t.lo && upy <= t.hi &&
                                      upz >= t.lo && upz <= t.hi;
                    const bool in_q = uqx >= t.lo && uqx <= t.hi && uqy >= t.lo && uqy <= t.hi &&
                                      uqz >= t.lo && uqz <= t.hi;
                    out.leak += static_cast<std::uint64_t>(!in_p) +
                                static_cast<std::uint64_t>(!in_q);
                    if (in_p && in_q) {
                        const double fp = interp(t, upx, upy, upz);
                        const double fq = interp(t, uqx, uqy, uqz);
                        acc += t.ww[k] * (fp * fq);
                    }
                }
                out.gain_raw += g.K * acc;
            }
    return out;
}

}  // namespace flrwb::kernels

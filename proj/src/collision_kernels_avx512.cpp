// AVX-512 variant of the collision pair pass (8 lanes). Same structure and
// the same mul/add geometry order as the scalar kernel, so cube
// classification and leakage counts match it bit for bit.

#if defined(__AVX512F__)

#include <immintrin.h>

#include <cmath>

#include "flrwb/collision_kernels.hpp"

namespace flrwb::kernels {

namespace {

struct PairGeometry {
    double K;
    double B;
    double C;
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

inline __m512d interp8(const EvalTables& t, __m512d ux, __m512d uy, __m512d uz) {
    const __m512d lo = _mm512_set1_pd(t.lo);
    const __m512d hi = _mm512_set1_pd(t.hi);
    ux = _mm512_min_pd(_mm512_max_pd(ux, lo), hi);
    uy = _mm512_min_pd(_mm512_max_pd(uy, lo), hi);
    uz = _mm512_min_pd(_mm512_max_pd(uz, lo), hi);
    const __m512d kxd = _mm512_floor_pd(ux);
    const __m512d kyd = _mm512_floor_pd(uy);
    const __m512d kzd = _mm512_floor_pd(uz);
    const __m512d fx = _mm512_sub_pd(ux, kxd);
    const __m512d fy = _mm512_sub_pd(uy, kyd);
    const __m512d fz = _mm512_sub_pd(uz, kzd);
    const int np = t.n + 2;
    const __m256i one = _mm256_set1_epi32(1);
    const __m256i npv = _mm256_set1_epi32(np);
    const __m256i kx = _mm256_add_epi32(_mm512_cvtpd_epi32(kxd), one);
    const __m256i ky = _mm256_add_epi32(_mm512_cvtpd_epi32(kyd), one);
    const __m256i kz = _mm256_add_epi32(_mm512_cvtpd_epi32(kzd), one);
    const __m256i base = _mm256_add_epi32(
        _mm256_mullo_epi32(_mm256_add_epi32(_mm256_mullo_epi32(kz, npv), ky), npv), kx);

    const int sy = np;
    const int sz = np * np;
    const double* p = t.fpad;
    const __m512d v000 = _mm512_i32gather_pd(base, p, 8);
    const __m512d v100 = _mm512_i32gather_pd(base, p + 1, 8);
    const __m512d v010 = _mm512_i32gather_pd(base, p + sy, 8);
    const __m512d v110 = _mm512_i32gather_pd(base, p + sy + 1, 8);
    const __m512d v001 = _mm512_i32gather_pd(base, p + sz, 8);
    const __m512d v101 = _mm512_i32gather_pd(base, p + sz + 1, 8);
    const __m512d v011 = _mm512_i32gather_pd(base, p + sz + sy, 8);
    const __m512d v111 = _mm512_i32gather_pd(base, p + sz + sy + 1, 8);

    const __m512d c00 = _mm512_fmadd_pd(fx, _mm512_sub_pd(v100, v000), v000);
    const __m512d c10 = _mm512_fmadd_pd(fx, _mm512_sub_pd(v110, v010), v010);
    const __m512d c01 = _mm512_fmadd_pd(fx, _mm512_sub_pd(v101, v001), v001);
    const __m512d c11 = _mm512_fmadd_pd(fx, _mm512_sub_pd(v111, v011), v011);
    const __m512d d0 = _mm512_fmadd_pd(fy, _mm512_sub_pd(c10, c00), c00);
    const __m512d d1 = _mm512_fmadd_pd(fy, _mm512_sub_pd(c11, c01), c01);
    return _mm512_fmadd_pd(fz, _mm512_sub_pd(d1, d0), d0);
}

inline __mmask8 inside_mask(__m512d x, __m512d y, __m512d z, __m512d lo, __m512d hi) {
    const __mmask8 mx = _mm512_cmp_pd_mask(x, lo, _CMP_GE_OQ) &
                        _mm512_cmp_pd_mask(x, hi, _CMP_LE_OQ);
    const __mmask8 my = _mm512_cmp_pd_mask(y, lo, _CMP_GE_OQ) &
                        _mm512_cmp_pd_mask(y, hi, _CMP_LE_OQ);
    const __mmask8 mz = _mm512_cmp_pd_mask(z, lo, _CMP_GE_OQ) &
                        _mm512_cmp_pd_mask(z, hi, _CMP_LE_OQ);
    return mx & my & mz;
}

}  // namespace

void pair_pass_avx512(const EvalTables& t, std::int64_t row_begin, std::int64_t row_end,
                      double* gain_raw, double* loss_raw, std::uint64_t* leak) {
    const int n = t.n;
    const __m512d lo = _mm512_set1_pd(t.lo);
    const __m512d hi = _mm512_set1_pd(t.hi);
    const __m512d zero = _mm512_setzero_pd();
    const __m512d disp = _mm512_set1_pd(t.disp);
    std::uint64_t leaked = 0;

    for (std::int64_t i = row_begin; i < row_end; ++i) {
        const int ix = static_cast<int>(i % n);
        const int iy = static_cast<int>((i / n) % n);
        const int iz = static_cast<int>(i / (static_cast<std::int64_t>(n) * n));
        const double px = t.axis_hat[ix], py = t.axis_hat[iy], pz = t.axis_hat[iz];
        const double pe = t.energy[i];
        const double fi = t.f[i];
        const __m512d uix = _mm512_set1_pd(ix);
        const __m512d uiy = _mm512_set1_pd(iy);
        const __m512d uiz = _mm512_set1_pd(iz);
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
            const double qxs = t.axis_hat[jx], qys = t.axis_hat[jy], qzs = t.axis_hat[jz];
            const double qe = t.energy[j];
            const auto g = pair_geometry(px, py, pz, pe, qxs, qys, qzs, qe);

            loss_i += g.K * t.f[j];
            loss_raw[j] += g.K * fi;

            const __m512d nx = _mm512_set1_pd(g.nx);
            const __m512d ny = _mm512_set1_pd(g.ny);
            const __m512d nz = _mm512_set1_pd(g.nz);
            const __m512d qx = _mm512_set1_pd(qxs);
            const __m512d qy = _mm512_set1_pd(qys);
            const __m512d qz = _mm512_set1_pd(qzs);
            const __m512d B = _mm512_set1_pd(g.B);
            const __m512d C = _mm512_set1_pd(g.C);
            const __m512d ujx = _mm512_set1_pd(jx);
            const __m512d ujy = _mm512_set1_pd(jy);
            const __m512d ujz = _mm512_set1_pd(jz);

            __m512d acc = zero;
            for (int k = 0; k < t.m_padded; k += 8) {
                const __m512d wxk = _mm512_loadu_pd(t.wx + k);
                const __m512d wyk = _mm512_loadu_pd(t.wy + k);
                const __m512d wzk = _mm512_loadu_pd(t.wz + k);
                const __m512d wwk = _mm512_loadu_pd(t.ww + k);

                // Same op order as the scalar kernel: no FMA here.
                const __m512d t1 = _mm512_add_pd(
                    _mm512_add_pd(_mm512_mul_pd(nx, wxk), _mm512_mul_pd(ny, wyk)),
                    _mm512_mul_pd(nz, wzk));
                const __m512d t2 = _mm512_add_pd(
                    _mm512_add_pd(_mm512_mul_pd(qx, wxk), _mm512_mul_pd(qy, wyk)),
                    _mm512_mul_pd(qz, wzk));
                const __m512d c = _mm512_add_pd(t2, _mm512_mul_pd(B, t1));
                const __m512d d = _mm512_mul_pd(disp, c);
                const __m512d e = _mm512_mul_pd(C, t1);
                const __m512d sx = _mm512_mul_pd(d, _mm512_add_pd(wxk, _mm512_mul_pd(e, nx)));
                const __m512d sy = _mm512_mul_pd(d, _mm512_add_pd(wyk, _mm512_mul_pd(e, ny)));
                const __m512d sz = _mm512_mul_pd(d, _mm512_add_pd(wzk, _mm512_mul_pd(e, nz)));
                const __m512d upx = _mm512_add_pd(uix, sx);
                const __m512d upy = _mm512_add_pd(uiy, sy);
                const __m512d upz = _mm512_add_pd(uiz, sz);
                const __m512d uqx = _mm512_sub_pd(ujx, sx);
                const __m512d uqy = _mm512_sub_pd(ujy, sy);
                const __m512d uqz = _mm512_sub_pd(ujz, sz);

                const __mmask8 in_p = inside_mask(upx, upy, upz, lo, hi);
                const __mmask8 in_q = inside_mask(uqx, uqy, uqz, lo, hi);
                const __mmask8 valid = _mm512_cmp_pd_mask(wwk, zero, _CMP_GT_OQ);
                leaked += __builtin_popcount(static_cast<unsigned>(~in_p & valid));
                leaked += __builtin_popcount(static_cast<unsigned>(~in_q & valid));

                const __mmask8 both = in_p & in_q;
                if (both == 0) continue;
                const __m512d fp = interp8(t, upx, upy, upz);
                const __m512d fq = interp8(t, uqx, uqy, uqz);
                const __m512d prod = _mm512_maskz_mul_pd(both, fp, fq);
                acc = _mm512_fmadd_pd(wwk, prod, acc);
            }
            const double pair_gain = g.K * _mm512_reduce_add_pd(acc);
            gain_i += pair_gain;
            gain_raw[j] += pair_gain;
        }
        gain_raw[i] += gain_i;
        loss_raw[i] += loss_i;
    }
    *leak += leaked;
}

}  // namespace flrwb::kernels

#endif  // __AVX512F__

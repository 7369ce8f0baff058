// AVX2 + FMA variant of the collision pair pass. Compiled only in this
// translation unit with -mavx2 -mfma; selected at runtime via cpuid.
//
// The geometry chain (scatter axis, outgoing lattice coordinates, cube
// classification) uses plain mul/add in the same order as the scalar kernel,
// so leakage counts match it bit for bit. FMA appears only in the
// interpolation and in the weighted accumulation.

#if defined(__AVX2__) && defined(__FMA__)

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

// Trilinear gather at 4 lattice-unit points. Coordinates are clamped for
// indexing; the caller masks out-of-cube lanes afterwards.
inline __m256d interp4(const EvalTables& t, __m256d ux, __m256d uy, __m256d uz) {
    const __m256d lo = _mm256_set1_pd(t.lo);
    const __m256d hi = _mm256_set1_pd(t.hi);
    ux = _mm256_min_pd(_mm256_max_pd(ux, lo), hi);
    uy = _mm256_min_pd(_mm256_max_pd(uy, lo), hi);
    uz = _mm256_min_pd(_mm256_max_pd(uz, lo), hi);
    const __m256d kxd = _mm256_floor_pd(ux);
    const __m256d kyd = _mm256_floor_pd(uy);
    const __m256d kzd = _mm256_floor_pd(uz);
    const __m256d fx = _mm256_sub_pd(ux, kxd);
    const __m256d fy = _mm256_sub_pd(uy, kyd);
    const __m256d fz = _mm256_sub_pd(uz, kzd);
    const int np = t.n + 2;
    const __m128i one = _mm_set1_epi32(1);
    const __m128i npv = _mm_set1_epi32(np);
    __m128i kx = _mm_add_epi32(_mm256_cvtpd_epi32(kxd), one);
    __m128i ky = _mm_add_epi32(_mm256_cvtpd_epi32(kyd), one);
    __m128i kz = _mm_add_epi32(_mm256_cvtpd_epi32(kzd), one);
    const __m128i base =
        _mm_add_epi32(_mm_mullo_epi32(_mm_add_epi32(_mm_mullo_epi32(kz, npv), ky), npv), kx);

    const int sy = np;
    const int sz = np * np;
    const double* p = t.fpad;
    const __m256d v000 = _mm256_i32gather_pd(p, base, 8);
    const __m256d v100 = _mm256_i32gather_pd(p + 1, base, 8);
    const __m256d v010 = _mm256_i32gather_pd(p + sy, base, 8);
    const __m256d v110 = _mm256_i32gather_pd(p + sy + 1, base, 8);
    const __m256d v001 = _mm256_i32gather_pd(p + sz, base, 8);
    const __m256d v101 = _mm256_i32gather_pd(p + sz + 1, base, 8);
    const __m256d v011 = _mm256_i32gather_pd(p + sz + sy, base, 8);
    const __m256d v111 = _mm256_i32gather_pd(p + sz + sy + 1, base, 8);

    const __m256d c00 = _mm256_fmadd_pd(fx, _mm256_sub_pd(v100, v000), v000);
    const __m256d c10 = _mm256_fmadd_pd(fx, _mm256_sub_pd(v110, v010), v010);
    const __m256d c01 = _mm256_fmadd_pd(fx, _mm256_sub_pd(v101, v001), v001);
    const __m256d c11 = _mm256_fmadd_pd(fx, _mm256_sub_pd(v111, v011), v011);
    const __m256d d0 = _mm256_fmadd_pd(fy, _mm256_sub_pd(c10, c00), c00);
    const __m256d d1 = _mm256_fmadd_pd(fy, _mm256_sub_pd(c11, c01), c01);
    return _mm256_fmadd_pd(fz, _mm256_sub_pd(d1, d0), d0);
}

inline double hsum(__m256d v) {
    const __m128d vl = _mm256_castpd256_pd128(v);
    const __m128d vh = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(vl, vh);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

inline __m256d inside_mask(__m256d x, __m256d y, __m256d z, __m256d lo, __m256d hi) {
    const __m256d mx =
        _mm256_and_pd(_mm256_cmp_pd(x, lo, _CMP_GE_OQ), _mm256_cmp_pd(x, hi, _CMP_LE_OQ));
    const __m256d my =
        _mm256_and_pd(_mm256_cmp_pd(y, lo, _CMP_GE_OQ), _mm256_cmp_pd(y, hi, _CMP_LE_OQ));
    const __m256d mz =
        _mm256_and_pd(_mm256_cmp_pd(z, lo, _CMP_GE_OQ), _mm256_cmp_pd(z, hi, _CMP_LE_OQ));
    return _mm256_and_pd(_mm256_and_pd(mx, my), mz);
}

}  // namespace

void pair_pass_avx2(const EvalTables& t, std::int64_t row_begin, std::int64_t row_end,
                    double* gain_raw, double* loss_raw, std::uint64_t* leak) {
    const int n = t.n;
    const __m256d lo = _mm256_set1_pd(t.lo);
    const __m256d hi = _mm256_set1_pd(t.hi);
    const __m256d zero = _mm256_setzero_pd();
    const __m256d disp = _mm256_set1_pd(t.disp);
    std::uint64_t leaked = 0;

    for (std::int64_t i = row_begin; i < row_end; ++i) {
        const int ix = static_cast<int>(i % n);
        const int iy = static_cast<int>((i / n) % n);
        const int iz = static_cast<int>(i / (static_cast<std::int64_t>(n) * n));
        const double px = t.axis_hat[ix], py = t.axis_hat[iy], pz = t.axis_hat[iz];
        const double pe = t.energy[i];
        const double fi = t.f[i];
        const __m256d uix = _mm256_set1_pd(ix);
        const __m256d uiy = _mm256_set1_pd(iy);
        const __m256d uiz = _mm256_set1_pd(iz);
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

            const __m256d nx = _mm256_set1_pd(g.nx);
            const __m256d ny = _mm256_set1_pd(g.ny);
            const __m256d nz = _mm256_set1_pd(g.nz);
            const __m256d qx = _mm256_set1_pd(qxs);
            const __m256d qy = _mm256_set1_pd(qys);
            const __m256d qz = _mm256_set1_pd(qzs);
            const __m256d B = _mm256_set1_pd(g.B);
            const __m256d C = _mm256_set1_pd(g.C);
            const __m256d ujx = _mm256_set1_pd(jx);
            const __m256d ujy = _mm256_set1_pd(jy);
            const __m256d ujz = _mm256_set1_pd(jz);

            __m256d acc = zero;
            for (int k = 0; k < t.m_padded; k += 4) {
                const __m256d wxk = _mm256_loadu_pd(t.wx + k);
                const __m256d wyk = _mm256_loadu_pd(t.wy + k);
                const __m256d wzk = _mm256_loadu_pd(t.wz + k);
                const __m256d wwk = _mm256_loadu_pd(t.ww + k);

                // Same op order as the scalar kernel: no FMA here.
                const __m256d t1 = _mm256_add_pd(
                    _mm256_add_pd(_mm256_mul_pd(nx, wxk), _mm256_mul_pd(ny, wyk)),
                    _mm256_mul_pd(nz, wzk));
                const __m256d t2 = _mm256_add_pd(
                    _mm256_add_pd(_mm256_mul_pd(qx, wxk), _mm256_mul_pd(qy, wyk)),
                    _mm256_mul_pd(qz, wzk));
                const __m256d c = _mm256_add_pd(t2, _mm256_mul_pd(B, t1));
                const __m256d d = _mm256_mul_pd(disp, c);
                const __m256d e = _mm256_mul_pd(C, t1);
                const __m256d sx = _mm256_mul_pd(d, _mm256_add_pd(wxk, _mm256_mul_pd(e, nx)));
                const __m256d sy = _mm256_mul_pd(d, _mm256_add_pd(wyk, _mm256_mul_pd(e, ny)));
                const __m256d sz = _mm256_mul_pd(d, _mm256_add_pd(wzk, _mm256_mul_pd(e, nz)));
                const __m256d upx = _mm256_add_pd(uix, sx);
                const __m256d upy = _mm256_add_pd(uiy, sy);
                const __m256d upz = _mm256_add_pd(uiz, sz);
                const __m256d uqx = _mm256_sub_pd(ujx, sx);
                const __m256d uqy = _mm256_sub_pd(ujy, sy);
                const __m256d uqz = _mm256_sub_pd(ujz, sz);

                const __m256d in_p = inside_mask(upx, upy, upz, lo, hi);
                const __m256d in_q = inside_mask(uqx, uqy, uqz, lo, hi);
                const __m256d valid = _mm256_cmp_pd(wwk, zero, _CMP_GT_OQ);
                leaked += __builtin_popcount(
                    _mm256_movemask_pd(_mm256_andnot_pd(in_p, valid)));
                leaked += __builtin_popcount(
                    _mm256_movemask_pd(_mm256_andnot_pd(in_q, valid)));

                const __m256d both = _mm256_and_pd(in_p, in_q);
                if (_mm256_movemask_pd(both) == 0) continue;
                const __m256d fp = interp4(t, upx, upy, upz);
                const __m256d fq = interp4(t, uqx, uqy, uqz);
                const __m256d prod = _mm256_and_pd(_mm256_mul_pd(fp, fq), both);
                acc = _mm256_fmadd_pd(wwk, prod, acc);
            }
            const double pair_gain = g.K * hsum(acc);
            gain_i += pair_gain;
            gain_raw[j] += pair_gain;
        }
        gain_raw[i] += gain_i;
        loss_raw[i] += loss_i;
    }
    *leak += leaked;
}

}  // namespace flrwb::kernels

#endif  // __AVX2__ && __FMA__

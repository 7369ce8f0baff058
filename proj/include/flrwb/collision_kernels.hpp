#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace flrwb::kernels {

/// Read-only tables for one collision pass, prepared by the operator. All
/// kinematics run in the orthonormal frame (momenta divided by the scale
/// factor); interpolation runs in lattice units against a zero ghost shell.
struct EvalTables {
    int n = 0;                      // lattice points per axis
    std::int64_t size = 0;          // n^3
    double disp = 0.0;              // 2R/delta: orthonormal shift -> lattice units
    double lo = 0.0;                // cube bounds in lattice units: [-0.5, n-0.5]
    double hi = 0.0;
    const double* axis_hat = nullptr;  // n: node coordinate / R
    const double* energy = nullptr;    // n^3: sqrt(1 + |p_hat|^2)
    const double* f = nullptr;         // n^3: raw values
    const double* fpad = nullptr;      // (n+2)^3: values with zero ghost shell
    int m = 0;                         // folded sphere node count
    int m_padded = 0;                  // m rounded up to a SIMD multiple (zero weights)
    const double* wx = nullptr;        // m_padded each
    const double* wy = nullptr;
    const double* wz = nullptr;
    const double* ww = nullptr;
};

/// Triangular pair pass over rows [row_begin, row_end): for flat index i in
/// the range and every j > i, accumulates
///   gain_raw[i] += K_ij * sum_w ww * f~(p') f~(q')   (and the same to j),
///   loss_raw[i] += K_ij * f[j],  loss_raw[j] += K_ij * f[i],
/// with K = 1/(p0 q0 sqrt(s)). Outgoing momenta falling outside the cube
/// contribute zero and bump *leak. The diagonal j == i is excluded.
using PairPassFn = void (*)(const EvalTables&, std::int64_t row_begin, std::int64_t row_end,
                            double* gain_raw, double* loss_raw, std::uint64_t* leak);

void pair_pass_scalar(const EvalTables&, std::int64_t, std::int64_t, double*, double*,
                      std::uint64_t*);
#if defined(FLRWB_HAVE_AVX2_TU)
void pair_pass_avx2(const EvalTables&, std::int64_t, std::int64_t, double*, double*,
                    std::uint64_t*);
#endif
#if defined(FLRWB_HAVE_AVX512_TU)
void pair_pass_avx512(const EvalTables&, std::int64_t, std::int64_t, double*, double*,
                      std::uint64_t*);
#endif

/// Same sums for a single (possibly off-lattice) evaluation point, covering
/// the full q lattice including q = p when the point is a node.
struct PointSums {
    double gain_raw = 0.0;
    double loss_raw = 0.0;
    std::uint64_t leak = 0;
};
PointSums point_pass_scalar(const EvalTables&, double px_hat, double py_hat, double pz_hat,
                            double p_energy, double pux, double puy, double puz);

/// Runtime-selected pair kernel. Honors FLRWB_KERNEL=scalar|avx2|avx512|auto.
PairPassFn select_pair_pass();
std::string selected_kernel_name();

}  // namespace flrwb::kernels

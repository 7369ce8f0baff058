#include "flrwb/distribution_grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace flrwb {

DistributionGrid::DistributionGrid(double extent, int n)
    : extent_(extent), n_(n), delta_(2.0 * extent / n) {
    if (!(extent > 0.0)) throw std::invalid_argument("grid extent must be positive");
    if (n < 2) throw std::invalid_argument("grid needs at least 2 points per axis");
    values_.assign(static_cast<std::size_t>(size()), 0.0);
}

double DistributionGrid::sample(const CovariantMomentum& p) const {
    if (!inside(p)) return 0.0;
    const double inv_d = 1.0 / delta_;
    const double ux = (p.p1 + extent_) * inv_d - 0.5;
    const double uy = (p.p2 + extent_) * inv_d - 0.5;
    const double uz = (p.p3 + extent_) * inv_d - 0.5;
    const int kx = static_cast<int>(std::floor(ux));
    const int ky = static_cast<int>(std::floor(uy));
    const int kz = static_cast<int>(std::floor(uz));
    const double fx = ux - kx, fy = uy - ky, fz = uz - kz;

    auto value = [&](int ix, int iy, int iz) -> double {
        if (ix < 0 || iy < 0 || iz < 0 || ix >= n_ || iy >= n_ || iz >= n_) return 0.0;
        return values_[index(ix, iy, iz)];
    };
    double acc = 0.0;
    for (int dz = 0; dz < 2; ++dz)
        for (int dy = 0; dy < 2; ++dy)
            for (int dx = 0; dx < 2; ++dx) {
                const double w = (dx ? fx : 1.0 - fx) * (dy ? fy : 1.0 - fy) * (dz ? fz : 1.0 - fz);
                acc += w * value(kx + dx, ky + dy, kz + dz);
            }
    return acc;
}

double DistributionGrid::max_value() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, v);
    return m;
}

double DistributionGrid::boundary_max() const {
    double m = 0.0;
    for (int iz = 0; iz < n_; ++iz)
        for (int iy = 0; iy < n_; ++iy)
            for (int ix = 0; ix < n_; ++ix) {
                const bool edge = ix == 0 || iy == 0 || iz == 0 || ix == n_ - 1 || iy == n_ - 1 ||
                                  iz == n_ - 1;
                if (edge) m = std::max(m, values_[index(ix, iy, iz)]);
            }
    return m;
}

DistributionGrid initial_data(const std::string& kind, double epsilon, double extent, int n,
                              const InitialDataParams& params) {
    if (epsilon < 0.0) throw std::invalid_argument("epsilon must be nonnegative");
    DistributionGrid grid(extent, n);
    if (kind == "gaussian") {
        std::int64_t k = 0;
        for (int iz = 0; iz < n; ++iz)
            for (int iy = 0; iy < n; ++iy)
                for (int ix = 0; ix < n; ++ix, ++k) {
                    const auto p = grid.node(ix, iy, iz);
                    grid.values()[k] = epsilon * std::exp(-p.norm2());
                }
    } else if (kind == "shell") {
        if (!(params.width > 0.0)) throw std::invalid_argument("shell width must be positive");
        std::int64_t k = 0;
        for (int iz = 0; iz < n; ++iz)
            for (int iy = 0; iy < n; ++iy)
                for (int ix = 0; ix < n; ++ix, ++k) {
                    const auto p = grid.node(ix, iy, iz);
                    const double r = std::sqrt(p.norm2());
                    const double d = (r - params.r0) / params.width;
                    grid.values()[k] = epsilon * std::exp(-d * d);
                }
    } else {
        throw std::invalid_argument("unknown initial data kind: " + kind);
    }
    const double m = grid.max_value();
    if (m > 0.0 && grid.boundary_max() > 1e-12 * m)
        throw std::invalid_argument("initial data is not negligible at the cube boundary; "
                                    "increase the grid extent");
    return grid;
}

}  // namespace flrwb

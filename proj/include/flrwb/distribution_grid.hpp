#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "flrwb/four_vector.hpp"

namespace flrwb {

/// Uniform cell-centered lattice over [-extent, extent]^3 in covariant
/// momentum, holding nonnegative distribution values. Node i along an axis
/// sits at -extent + (i + 1/2) * delta with delta = 2 extent / n.
class DistributionGrid {
  public:
    DistributionGrid(double extent, int n);

    double extent() const { return extent_; }
    int n() const { return n_; }
    std::int64_t size() const { return static_cast<std::int64_t>(n_) * n_ * n_; }
    double delta() const { return delta_; }
    double cell_volume() const { return delta_ * delta_ * delta_; }

    double coord(int i) const { return -extent_ + (i + 0.5) * delta_; }
    CovariantMomentum node(int ix, int iy, int iz) const {
        return {coord(ix), coord(iy), coord(iz)};
    }
    std::int64_t index(int ix, int iy, int iz) const {
        return (static_cast<std::int64_t>(iz) * n_ + iy) * n_ + ix;
    }

    double& at(int ix, int iy, int iz) { return values_[index(ix, iy, iz)]; }
    double at(int ix, int iy, int iz) const { return values_[index(ix, iy, iz)]; }
    std::vector<double>& values() { return values_; }
    const std::vector<double>& values() const { return values_; }

    /// Trilinear interpolation with zero extension: points outside the cube
    /// return exactly zero; points in the outer half-cell margin taper
    /// against a zero ghost shell.
    double sample(const CovariantMomentum& p) const;
    bool inside(const CovariantMomentum& p) const {
        return std::abs(p.p1) <= extent_ && std::abs(p.p2) <= extent_ && std::abs(p.p3) <= extent_;
    }

    double max_value() const;
    /// Largest value on the outermost node shell, for cutoff-adequacy checks.
    double boundary_max() const;

    /// Sum of f * weight(node) * delta^3 over the lattice.
    template <class W>
    double weighted_sum(W&& weight) const {
        double acc = 0.0;
        std::int64_t k = 0;
        for (int iz = 0; iz < n_; ++iz)
            for (int iy = 0; iy < n_; ++iy)
                for (int ix = 0; ix < n_; ++ix, ++k)
                    acc += values_[k] * weight(node(ix, iy, iz));
        return acc * cell_volume();
    }

  private:
    double extent_;
    int n_;
    double delta_;
    std::vector<double> values_;
};

/// Smooth nonnegative initial data presets. "gaussian": eps * exp(-|p|^2);
/// "shell": eps * exp(-(|p| - r0)^2 / w^2). Throws on unknown kind, and when
/// the boundary shell exceeds 1e-12 of the maximum (inadequate cutoff).
struct InitialDataParams {
    double r0 = 2.0;
    double width = 0.5;
};

DistributionGrid initial_data(const std::string& kind, double epsilon, double extent, int n,
                              const InitialDataParams& params = {});

}  // namespace flrwb

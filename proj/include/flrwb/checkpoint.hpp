#pragma once

#include <string>

#include "flrwb/distribution_grid.hpp"

namespace flrwb {

/// Flat binary checkpoint: header (extent f64, n u64, t f64, R f64) followed
/// by n^3 row-major f values, all little-endian 64-bit.
struct Checkpoint {
    double t = 0.0;
    double R = 1.0;
    DistributionGrid grid{1.0, 2};
};

void save_checkpoint(const std::string& path, const DistributionGrid& grid, double t, double R);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace flrwb

#pragma once

#include <cmath>
#include <numbers>
#include <random>

#include "flrwb/four_vector.hpp"

namespace testutil {

inline double u01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline flrwb::Vec3 random_direction(std::mt19937_64& rng) {
    const double cz = 1.0 - 2.0 * u01(rng);
    const double phi = 2.0 * std::numbers::pi * u01(rng);
    const double sz = std::sqrt(std::max(0.0, 1.0 - cz * cz));
    return {sz * std::cos(phi), sz * std::sin(phi), cz};
}

inline flrwb::Vec3 random_vec(std::mt19937_64& rng, double scale) {
    return scale * (2.0 * u01(rng)) * random_direction(rng);
}

inline bool close(double a, double b, double rel, double abs = 0.0) {
    return std::abs(a - b) <= std::max(abs, rel * std::max(std::abs(a), std::abs(b)));
}

}  // namespace testutil

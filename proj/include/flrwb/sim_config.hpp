#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "flrwb/diagnostics.hpp"

namespace flrwb {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Simulation configuration; loaded from JSON, validated, and value-identical
/// under a load/serialize round trip.
struct SimConfig {
    double lambda = 3.0;
    std::string scale_factor = "desitter";  // desitter | upper | coupled

    struct Grid {
        double extent = 6.0;
        int n = 12;
    } grid;

    struct Sphere {
        int polar_order = 8;
        int azimuth_order = 16;
    } sphere;

    double dt = 0.01;
    double T = 10.0;
    int picard_iters = 2;

    struct Initial {
        std::string kind = "gaussian";  // gaussian | shell
        double epsilon = 1e-3;
        double r0 = 2.0;
        double width = 0.5;
    } initial;

    std::vector<NormSpec> norms = {{0, 0}, {2, 2}};

    struct Output {
        std::string path = "run.csv";
        double interval = 0.1;
    } output;

    std::uint64_t seed = 1;

    void validate() const;
};

SimConfig config_from_json_text(const std::string& text);
SimConfig load_config(const std::string& path);
std::string config_to_json_text(const SimConfig& config);

}  // namespace flrwb

#include "flrwb/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace flrwb {

static_assert(std::endian::native == std::endian::little,
              "checkpoint writer assumes a little-endian host");

void save_checkpoint(const std::string& path, const DistributionGrid& grid, double t, double R) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open checkpoint for writing: " + path);
    const double extent = grid.extent();
    const std::uint64_t n = static_cast<std::uint64_t>(grid.n());
    out.write(reinterpret_cast<const char*>(&extent), sizeof extent);
    out.write(reinterpret_cast<const char*>(&n), sizeof n);
    out.write(reinterpret_cast<const char*>(&t), sizeof t);
    out.write(reinterpret_cast<const char*>(&R), sizeof R);
    out.write(reinterpret_cast<const char*>(grid.values().data()),
              static_cast<std::streamsize>(grid.values().size() * sizeof(double)));
    if (!out) throw std::runtime_error("short write on checkpoint: " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open checkpoint: " + path);
    double extent = 0.0, t = 0.0, R = 0.0;
    std::uint64_t n = 0;
    in.read(reinterpret_cast<char*>(&extent), sizeof extent);
    in.read(reinterpret_cast<char*>(&n), sizeof n);
    in.read(reinterpret_cast<char*>(&t), sizeof t);
    in.read(reinterpret_cast<char*>(&R), sizeof R);
    if (!in || n < 2 || n > 4096 || !(extent > 0.0))
        throw std::runtime_error("corrupt checkpoint header: " + path);
    Checkpoint cp{t, R, DistributionGrid(extent, static_cast<int>(n))};
    in.read(reinterpret_cast<char*>(cp.grid.values().data()),
            static_cast<std::streamsize>(cp.grid.values().size() * sizeof(double)));
    if (!in) throw std::runtime_error("corrupt checkpoint payload: " + path);
    return cp;
}

}  // namespace flrwb

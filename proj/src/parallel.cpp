#include "flrwb/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <thread>

namespace flrwb {

int worker_count() {
    if (const char* env = std::getenv("THREADS")) {
        const int v = std::atoi(env);
        if (v >= 1) return std::min(v, 256);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

std::vector<std::pair<std::int64_t, std::int64_t>> partition_pair_rows(std::int64_t n_rows,
                                                                       int parts) {
    parts = std::max(1, parts);
    std::vector<std::pair<std::int64_t, std::int64_t>> out;
    const double total = 0.5 * static_cast<double>(n_rows) * (n_rows + 1);
    std::int64_t begin = 0;
    for (int p = 0; p < parts && begin < n_rows; ++p) {
        std::int64_t end;
        if (p == parts - 1) {
            end = n_rows;
        } else {
            // Row i contributes n_rows - i pairs; cumulative count from row 0
            // to row e is total - (n-e)(n-e+1)/2. Solve for the target share.
            const double target = total * (p + 1) / parts;
            const double rem = total - target;
            const double x = (std::sqrt(8.0 * rem + 1.0) - 1.0) / 2.0;
            end = n_rows - static_cast<std::int64_t>(x);
            end = std::clamp(end, begin + 1, n_rows);
        }
        out.emplace_back(begin, end);
        begin = end;
    }
    return out;
}

void run_parts(const std::vector<std::pair<std::int64_t, std::int64_t>>& parts,
               const std::function<void(int, std::int64_t, std::int64_t)>& fn) {
    if (parts.size() == 1) {
        fn(0, parts[0].first, parts[0].second);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(parts.size());
    for (std::size_t p = 0; p < parts.size(); ++p)
        pool.emplace_back([&, p] { fn(static_cast<int>(p), parts[p].first, parts[p].second); });
    for (auto& th : pool) th.join();
}

}  // namespace flrwb

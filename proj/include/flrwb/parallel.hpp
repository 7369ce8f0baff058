#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace flrwb {

/// Worker count: THREADS environment variable when set, otherwise hardware
/// parallelism. Always at least 1.
int worker_count();

/// Row ranges [begin, end) over a triangular pair loop (row i spans N - i
/// pairs), balanced so each range carries roughly equal pair counts.
std::vector<std::pair<std::int64_t, std::int64_t>> partition_pair_rows(std::int64_t n_rows,
                                                                       int parts);

/// Runs fn(part_index, row_begin, row_end) on one thread per part.
void run_parts(const std::vector<std::pair<std::int64_t, std::int64_t>>& parts,
               const std::function<void(int, std::int64_t, std::int64_t)>& fn);

}  // namespace flrwb

#pragma once

#include <cstdint>
#include <functional>

namespace qcs {

// Fixed geometry for splitting a |d| interval into reduction blocks. The
// block size never depends on the thread count, so per-block partial results
// merged in block order are bit-identical for any number of workers.
inline constexpr int64_t kReductionBlock = int64_t{1} << 16;

int64_t block_count(int64_t lo, int64_t hi);

// Invokes fn(block_index, block_lo, block_hi) for every block covering
// [lo, hi]. fn runs concurrently on `threads` workers and must only write to
// storage indexed by its block.
void for_blocks(int64_t lo, int64_t hi, int threads,
                const std::function<void(int64_t, int64_t, int64_t)>& fn);

int resolve_threads(int requested);

}  // namespace qcs

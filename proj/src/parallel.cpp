#include "qcs/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <stdexcept>
#include <thread>
#include <vector>

namespace qcs {

int64_t block_count(int64_t lo, int64_t hi) {
    if (hi < lo) return 0;
    return (hi - lo) / kReductionBlock + 1;
}

int resolve_threads(int requested) {
    if (requested < 0) throw std::domain_error("thread count must be >= 0");
    if (requested > 0) return requested;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

void for_blocks(int64_t lo, int64_t hi, int threads,
                const std::function<void(int64_t, int64_t, int64_t)>& fn) {
    int64_t nblocks = block_count(lo, hi);
    if (nblocks == 0) return;
    threads = resolve_threads(threads);
    if (threads == 1 || nblocks == 1) {
        for (int64_t b = 0; b < nblocks; ++b) {
            int64_t blo = lo + b * kReductionBlock;
            int64_t bhi = std::min(hi, blo + kReductionBlock - 1);
            fn(b, blo, bhi);
        }
        return;
    }
    std::atomic<int64_t> next{0};
    auto worker = [&] {
        for (;;) {
            int64_t b = next.fetch_add(1);
            if (b >= nblocks) return;
            int64_t blo = lo + b * kReductionBlock;
            int64_t bhi = std::min(hi, blo + kReductionBlock - 1);
            fn(b, blo, bhi);
        }
    };
    std::vector<std::thread> pool;
    int n = static_cast<int>(std::min<int64_t>(threads, nblocks));
    pool.reserve(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
}

}  // namespace qcs

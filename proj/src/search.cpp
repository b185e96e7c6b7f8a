#include "nildyn/search.hpp"

#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace nildyn {

int worker_count() {
    if (const char* env = std::getenv("NILDYN_WORKERS")) {
        int w = std::atoi(env);
        if (w >= 1) return w;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

namespace {
constexpr std::int64_t kBlockLen = 1 << 14; // indices per block
}

std::optional<std::int64_t> least_witness(std::int64_t lo, std::int64_t hi,
                                          std::int64_t step,
                                          const std::function<bool(std::int64_t)>& pred,
                                          int workers) {
    if (step < 1 || lo > hi) return std::nullopt;
    if (workers <= 0) workers = worker_count();
    const std::int64_t total = (hi - lo) / step + 1; // index i -> lo + i*step
    const std::int64_t nblocks = (total + kBlockLen - 1) / kBlockLen;

    if (workers == 1 || nblocks == 1) {
        for (std::int64_t n = lo; n <= hi; n += step)
            if (pred(n)) return n;
        return std::nullopt;
    }

    std::atomic<std::int64_t> next_block{0};
    std::atomic<std::int64_t> best_index{total}; // index, not value
    auto run = [&] {
        for (;;) {
            std::int64_t b = next_block.fetch_add(1);
            if (b >= nblocks) return;
            std::int64_t first = b * kBlockLen;
            if (first >= best_index.load()) return; // everything later is worse
            std::int64_t last = std::min(first + kBlockLen, total);
            for (std::int64_t i = first; i < last; ++i) {
                if (i >= best_index.load()) break;
                if (pred(lo + i * step)) {
                    std::int64_t cur = best_index.load();
                    while (i < cur && !best_index.compare_exchange_weak(cur, i)) {
                    }
                    break;
                }
            }
        }
    };

    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(run);
    for (auto& t : pool) t.join();

    std::int64_t idx = best_index.load();
    if (idx >= total) return std::nullopt;
    return lo + idx * step;
}

} // namespace nildyn

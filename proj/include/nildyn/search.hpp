#ifndef NILDYN_SEARCH_HPP
#define NILDYN_SEARCH_HPP

#include <cstdint>
#include <functional>
#include <optional>

namespace nildyn {

// Worker count for parallel scans: NILDYN_WORKERS if set, otherwise the
// hardware concurrency (at least 1).
int worker_count();

// Least n in {lo, lo+step, lo+2*step, ...} with n <= hi satisfying pred,
// or none.  The range is partitioned into fixed-size blocks processed by
// a worker pool; the result is the global least witness independent of
// scheduling.
std::optional<std::int64_t> least_witness(std::int64_t lo, std::int64_t hi,
                                          std::int64_t step,
                                          const std::function<bool(std::int64_t)>& pred,
                                          int workers = 0);

} // namespace nildyn

#endif

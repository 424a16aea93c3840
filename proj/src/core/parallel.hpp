#pragma once

#include <cstdint>
#include <functional>

namespace difflab {

// Worker count: LAB_THREADS env var if set (>=1), otherwise hardware count.
// Work is split statically and every task is a pure function of its index
// range, so the partition never affects results.
int worker_count();

// fn(begin, end) over [0, n) split across workers; runs inline when n is
// small or one worker is available.
void parallel_for(int64_t n, const std::function<void(int64_t, int64_t)>& fn);

// one call per index, parallelized; used for coarse sweep cells
void parallel_for_each(int64_t n, const std::function<void(int64_t)>& fn);

}  // namespace difflab

#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace hardy {

/// Worker count: HARDY_THREADS if set and positive, else hardware concurrency (at least 1).
[[nodiscard]] unsigned worker_count();

/// Runs body(i) for every i in [0, count) across worker threads. Each index is
/// written by exactly one worker, so callers store into preallocated slots and
/// reduce afterwards in index order.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

/// Splits [begin, end) into fixed-size chunks. The chunking is independent of
/// the worker count, which keeps chunked reductions deterministic.
struct ChunkRange {
  long long begin;
  long long end;
};
[[nodiscard]] std::vector<ChunkRange> make_chunks(long long begin, long long end, long long chunk);

}  // namespace hardy

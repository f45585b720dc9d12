#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>

namespace coaltypes {

using Rng = std::mt19937_64;

// Independent stream for one replicate, a pure function of (seed, index).
Rng replicate_stream(std::uint64_t seed, std::uint64_t index);

inline constexpr std::size_t kReplicateChunk = 1024;

unsigned resolve_threads(unsigned requested);

// Splits [0, count) into consecutive chunks of kReplicateChunk indices and runs
// work(chunk, begin, end) for each on up to `threads` workers. The partition
// does not depend on the worker count, so per-chunk results merged in chunk
// order are reproducible. The first exception thrown by a worker is rethrown.
void for_each_chunk(std::size_t count, unsigned threads,
                    const std::function<void(std::size_t, std::size_t, std::size_t)>& work);

inline std::size_t chunk_count(std::size_t count) {
  return (count + kReplicateChunk - 1) / kReplicateChunk;
}

}  // namespace coaltypes

#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace coexlab::data {

struct RawTrace {
    std::vector<double> values;  // dBm samples in arrival order
    int label = 0;               // AP count of the generating scenario
    std::string source;          // scenario id, for bookkeeping
};

struct LabeledChunk {
    std::vector<double> values;
    int label = 0;
};

// Consecutive chunks overlap by three-fourths of their width.
std::size_t chunk_stride(std::size_t w);

// Number of chunks a trace of `len` values yields at width w (closed form).
std::size_t chunk_count(std::size_t len, std::size_t w);

// Windows starting at 0, w/4, 2w/4, ... wholly inside the trace, all
// carrying the trace's label. A trace shorter than w yields no chunks.
std::vector<LabeledChunk> chunk_trace(const RawTrace& trace, std::size_t w);

// Deterministic shuffle + halving: sizes differ by at most one, disjoint,
// union-complete.
std::pair<std::vector<LabeledChunk>, std::vector<LabeledChunk>> split_shuffle(
    std::vector<LabeledChunk> chunks, std::uint64_t seed);

}  // namespace coexlab::data

#pragma once

#include <string>
#include <vector>

#include "coexlab/data/chunker.hpp"

namespace coexlab::data {

// One record per line: integer label, then the chunk values, tab-separated.
// Doubles are printed shortest-round-trip, so read(write(x)) == x exactly.
void write_dataset(const std::vector<LabeledChunk>& chunks, const std::string& path);

// Malformed input raises std::runtime_error naming the offending line.
std::vector<LabeledChunk> read_dataset(const std::string& path);

}  // namespace coexlab::data

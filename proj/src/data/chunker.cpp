#include "coexlab/data/chunker.hpp"

#include <stdexcept>

#include "coexlab/rng.hpp"

namespace coexlab::data {

std::size_t chunk_stride(std::size_t w) { return w >= 4 ? w / 4 : 1; }

std::size_t chunk_count(std::size_t len, std::size_t w) {
    if (w == 0) throw std::invalid_argument("chunk_count: zero width");
    if (len < w) return 0;
    return (len - w) / chunk_stride(w) + 1;
}

std::vector<LabeledChunk> chunk_trace(const RawTrace& trace, std::size_t w) {
    if (w == 0) throw std::invalid_argument("chunk_trace: zero width");
    std::vector<LabeledChunk> out;
    if (trace.values.size() < w) return out;
    const std::size_t stride = chunk_stride(w);
    out.reserve(chunk_count(trace.values.size(), w));
    for (std::size_t start = 0; start + w <= trace.values.size(); start += stride) {
        LabeledChunk c;
        c.label = trace.label;
        c.values.assign(trace.values.begin() + static_cast<std::ptrdiff_t>(start),
                        trace.values.begin() + static_cast<std::ptrdiff_t>(start + w));
        out.push_back(std::move(c));
    }
    return out;
}

std::pair<std::vector<LabeledChunk>, std::vector<LabeledChunk>> split_shuffle(
    std::vector<LabeledChunk> chunks, std::uint64_t seed) {
    if (chunks.size() < 2) throw std::invalid_argument("split_shuffle: need at least 2 chunks");
    Rng rng(seed);
    // Fisher-Yates
    for (std::size_t i = chunks.size() - 1; i > 0; --i) {
        const std::size_t j = rng.next_below(i + 1);
        std::swap(chunks[i], chunks[j]);
    }
    const std::size_t half = (chunks.size() + 1) / 2;
    std::vector<LabeledChunk> train(chunks.begin(),
                                    chunks.begin() + static_cast<std::ptrdiff_t>(half));
    std::vector<LabeledChunk> test(chunks.begin() + static_cast<std::ptrdiff_t>(half),
                                   chunks.end());
    return {std::move(train), std::move(test)};
}

}  // namespace coexlab::data

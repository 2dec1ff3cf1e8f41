#include "coexlab/sim/dcf.hpp"

#include <stdexcept>

namespace coexlab::sim {

std::uint64_t draw_backoff(int stage, int w0, Rng& rng, int max_stage) {
    if (stage < 0 || stage > max_stage)
        throw std::invalid_argument("draw_backoff: invalid stage " + std::to_string(stage));
    if (w0 <= 0) throw std::invalid_argument("draw_backoff: W0 must be positive");
    const std::uint64_t window = static_cast<std::uint64_t>(w0) << stage;
    return rng.next_below(window);
}

}  // namespace coexlab::sim

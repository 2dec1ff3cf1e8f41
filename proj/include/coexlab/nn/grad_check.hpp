#pragma once

#include <cstdint>

namespace coexlab::nn {

// Central-difference checks of the hand-written backward passes against
// their forward implementations, over every coordinate of small random
// problems. Each returns the max relative error seen.
double grad_check_conv1d(std::size_t batch, std::size_t channels, std::size_t filters,
                         std::size_t kernel, std::size_t length, double h, std::uint64_t seed);

double grad_check_batch_norm(std::size_t batch, std::size_t channels, std::size_t length,
                             double h, std::uint64_t seed);

double grad_check_dense_softmax_ce(std::size_t batch, std::size_t in, std::size_t classes,
                                   double h, std::uint64_t seed);

}  // namespace coexlab::nn

#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace coexlab::nn {

std::size_t next_pow2(std::size_t n);

// In-place iterative radix-2 transform; size must be a power of two.
// inverse=true applies the 1/N scale.
void fft(std::vector<std::complex<double>>& a, bool inverse);

}  // namespace coexlab::nn

#pragma once

#include <cstddef>

#include "coexlab/nn/tensor.hpp"

namespace coexlab::nn {

// Low-pass indicator over the one-sided spectrum: bins with index <= cutoff
// survive, everything above is discarded on both the signal and the filter.
struct SpectralMask {
    std::size_t cutoff = 0;

    // Fraction of one-sided coefficients (N/2 + 1 of them) discarded.
    double compression_rate(std::size_t fft_len) const;

    // Mask discarding approximately `rate` of the one-sided coefficients.
    static SpectralMask from_compression(double rate, std::size_t fft_len);

    // Keeps the full band for the given transform length.
    static SpectralMask full(std::size_t fft_len) { return SpectralMask{fft_len / 2}; }
};

// Spectral-domain counterpart of conv1d: zero-padded to the next power of
// two >= length + kernel - 1, correlation realized by conjugating the
// filter spectrum, mask applied to both operands. With a full-band mask
// this matches conv1d to within FFT round-off.
// cutoff == 0 collapses the output to its DC component; *degenerate is set
// when provided.
Tensor fft_conv1d(const Tensor& x, const FilterBank& w, const SpectralMask& mask,
                  bool* degenerate = nullptr);

}  // namespace coexlab::nn

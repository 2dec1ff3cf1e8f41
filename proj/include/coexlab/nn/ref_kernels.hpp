#pragma once

#include "coexlab/nn/tensor.hpp"

// Serial reference kernels: straight transcriptions of the layer math with
// no blocking, no OpenMP, no reordering. They exist as the oracle the
// optimized kernels are tested against and as the baseline in kernel_bench.
// Keep them dumb.
namespace coexlab::nn::ref {

// Cross-correlation over channels, zero-padded "same" output length.
// pad_left = (kernel - 1) / 2.
Tensor conv1d(const Tensor& x, const FilterBank& w);

Tensor conv1d_grad_input(const Tensor& grad_out, const FilterBank& w, std::size_t in_channels);

FilterBank conv1d_grad_filters(const Tensor& x, const Tensor& grad_out, std::size_t kernel);

}  // namespace coexlab::nn::ref

#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "coexlab/data/normalize.hpp"
#include "coexlab/nn/kernels.hpp"
#include "coexlab/nn/tensor.hpp"

namespace coexlab::nn {

inline constexpr std::array<std::size_t, 3> kFcnFilters = {128, 256, 128};
inline constexpr std::array<std::size_t, 3> kFcnKernels = {8, 5, 3};

struct ConvBlock {
    FilterBank filters;  // (out_channels, in_channels, kernel)
    BatchNormState bn;
};

// Three conv/batch-norm/ReLU blocks, global average pooling and a dense
// classifier. Normalization constants travel with the model so inference
// can consume raw dBm streams.
struct FcnModel {
    std::size_t width = 0;    // chunk width the model was trained for
    std::size_t classes = 0;  // k
    std::array<ConvBlock, 3> blocks;
    DenseLayer head;
    data::NormStats norm;

    static FcnModel make(std::size_t width, std::size_t classes, std::uint64_t seed);
};

struct ForwardCache {
    Tensor input;
    std::array<Tensor, 3> conv_out;   // pre batch-norm
    std::array<BatchNormCache, 3> bn;
    std::array<Tensor, 3> bn_out;     // pre ReLU
    std::array<Tensor, 3> act;        // post ReLU
    std::vector<double> pooled;
    std::vector<double> logits;
};

// Inference-mode logits, batch × classes.
std::vector<double> fcn_forward(const FcnModel& model, const Tensor& batch);

// Training-mode forward filling the cache (batch statistics, saved
// activations) for the backward pass.
std::vector<double> fcn_forward_train(FcnModel& model, const Tensor& batch, ForwardCache& cache);

// Inference with FFT-compressed convolutions at the given compression rate.
std::vector<double> fcn_forward_compressed(const FcnModel& model, const Tensor& batch,
                                           double compression_rate);

std::vector<int> argmax_rows(const std::vector<double>& logits, std::size_t batch, std::size_t k);

// Versioned little-endian binary container; the loader rejects unknown
// versions and shape mismatches.
void save_model(const FcnModel& model, const std::string& path);
FcnModel load_model(const std::string& path);

}  // namespace coexlab::nn

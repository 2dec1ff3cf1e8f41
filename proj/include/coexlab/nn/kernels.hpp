#pragma once

#include <cstddef>
#include <vector>

#include "coexlab/nn/tensor.hpp"

// Optimized layer kernels. Loop order is chosen so the innermost loop runs
// along the contiguous length axis; OpenMP splits the independent outer
// dimension (batch or filter). ref_kernels.hpp holds the serial oracles.
namespace coexlab::nn {

Tensor conv1d(const Tensor& x, const FilterBank& w);

Tensor conv1d_grad_input(const Tensor& grad_out, const FilterBank& w, std::size_t in_channels);

FilterBank conv1d_grad_filters(const Tensor& x, const Tensor& grad_out, std::size_t kernel);

void relu_inplace(Tensor& x);

// Zeroes grad entries where the forward pre-activation was <= 0.
void relu_backward_inplace(const Tensor& pre_activation, Tensor& grad);

enum class BnMode { Train, Infer };

struct BatchNormState {
    std::vector<double> gamma, beta;
    std::vector<double> running_mean, running_var;
    double eps = 1e-5;
    double momentum = 0.1;  // running = (1-m)*running + m*batch

    explicit BatchNormState(std::size_t channels = 0)
        : gamma(channels, 1.0), beta(channels, 0.0),
          running_mean(channels, 0.0), running_var(channels, 1.0) {}
    std::size_t channels() const { return gamma.size(); }
};

// Saved forward quantities needed by the backward pass.
struct BatchNormCache {
    std::vector<double> mean, inv_std;
    Tensor x_hat;
};

// Train mode normalizes by batch statistics (biased variance) and updates
// running stats (unbiased variance); infer mode uses running stats.
Tensor batch_norm(const Tensor& x, BatchNormState& bn, BnMode mode,
                  BatchNormCache* cache = nullptr);

Tensor batch_norm_infer(const Tensor& x, const BatchNormState& bn);

Tensor batch_norm_backward(const Tensor& grad_out, const BatchNormCache& cache,
                           const BatchNormState& bn, std::vector<double>& grad_gamma,
                           std::vector<double>& grad_beta);

// Mean over the length axis: (b, c, l) -> row-major (b, c) matrix.
std::vector<double> global_avg_pool(const Tensor& x);

Tensor global_avg_pool_backward(const std::vector<double>& grad_pooled, std::size_t batch,
                                std::size_t channels, std::size_t length);

struct DenseLayer {
    std::size_t in = 0, out = 0;
    std::vector<double> weight;  // out × in, row-major
    std::vector<double> bias;    // out

    DenseLayer() = default;
    DenseLayer(std::size_t in_dim, std::size_t out_dim)
        : in(in_dim), out(out_dim), weight(in_dim * out_dim, 0.0), bias(out_dim, 0.0) {}
};

// y[b,o] = sum_i W[o,i] x[b,i] + bias[o]; x is row-major batch × in.
std::vector<double> dense_forward(const DenseLayer& d, const std::vector<double>& x,
                                  std::size_t batch);

void dense_backward(const DenseLayer& d, const std::vector<double>& x,
                    const std::vector<double>& grad_out, std::size_t batch,
                    std::vector<double>& grad_in, std::vector<double>& grad_w,
                    std::vector<double>& grad_b);

// Row-wise stable softmax over batch × k logits.
std::vector<double> softmax_rows(const std::vector<double>& logits, std::size_t batch,
                                 std::size_t k);

// Mean cross-entropy over the batch plus gradient w.r.t. the logits.
double cross_entropy(const std::vector<double>& logits, const std::vector<int>& labels,
                     std::size_t k, std::vector<double>* grad_logits = nullptr);

}  // namespace coexlab::nn

#include "coexlab/nn/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace coexlab::nn {
namespace {

// acc[t] += sum_k w[k] * x[t + k - pad], zero-padded outside [0, L).
// Head and tail positions are bounds-checked; the interior runs as K
// shifted axpy passes so the compiler vectorizes along t.
void accumulate_corr(double* acc, const double* x, const double* w, std::size_t K,
                     std::size_t pad, std::size_t L) {
    const std::size_t tail = K - 1 - pad;
    const std::size_t head_end = std::min(pad, L);
    for (std::size_t t = 0; t < head_end; ++t) {
        double s = 0.0;
        for (std::size_t k = 0; k < K; ++k) {
            const std::ptrdiff_t src = static_cast<std::ptrdiff_t>(t + k) -
                                       static_cast<std::ptrdiff_t>(pad);
            if (src >= 0 && src < static_cast<std::ptrdiff_t>(L)) s += w[k] * x[src];
        }
        acc[t] += s;
    }
    if (L >= K) {
        const std::size_t t_hi = L - tail;
        for (std::size_t k = 0; k < K; ++k) {
            const double wk = w[k];
            // t >= pad keeps t + k - pad in range as unsigned arithmetic
            for (std::size_t t = pad; t < t_hi; ++t) acc[t] += wk * x[t + k - pad];
        }
        for (std::size_t t = t_hi; t < L; ++t) {
            double s = 0.0;
            for (std::size_t k = 0; k < K; ++k) {
                const std::ptrdiff_t src = static_cast<std::ptrdiff_t>(t + k) -
                                           static_cast<std::ptrdiff_t>(pad);
                if (src >= 0 && src < static_cast<std::ptrdiff_t>(L)) s += w[k] * x[src];
            }
            acc[t] += s;
        }
    } else {
        for (std::size_t t = head_end; t < L; ++t) {
            double s = 0.0;
            for (std::size_t k = 0; k < K; ++k) {
                const std::ptrdiff_t src = static_cast<std::ptrdiff_t>(t + k) -
                                           static_cast<std::ptrdiff_t>(pad);
                if (src >= 0 && src < static_cast<std::ptrdiff_t>(L)) s += w[k] * x[src];
            }
            acc[t] += s;
        }
    }
}

}  // namespace

Tensor conv1d(const Tensor& x, const FilterBank& w) {
    if (w.channels != x.channels) throw std::invalid_argument("conv1d: channel mismatch");
    const std::size_t K = w.length;
    const std::size_t pad = (K - 1) / 2;
    const std::size_t L = x.length;
    Tensor out(x.batch, w.batch, L);
    const std::ptrdiff_t nb = static_cast<std::ptrdiff_t>(x.batch);
    const std::ptrdiff_t nf = static_cast<std::ptrdiff_t>(w.batch);
#pragma omp parallel for collapse(2) schedule(static)
    for (std::ptrdiff_t b = 0; b < nb; ++b)
        for (std::ptrdiff_t j = 0; j < nf; ++j) {
            double* o = out.row(b, j);
            for (std::size_t i = 0; i < x.channels; ++i)
                accumulate_corr(o, x.row(b, i), w.row(j, i), K, pad, L);
        }
    return out;
}

Tensor conv1d_grad_input(const Tensor& grad_out, const FilterBank& w, std::size_t in_channels) {
    const std::size_t K = w.length;
    const std::size_t pad = (K - 1) / 2;
    const std::size_t flip_pad = K - 1 - pad;
    const std::size_t L = grad_out.length;
    // Flipped, transposed bank: grad_input is a correlation of grad_out
    // with the kernel reversed and channel axes swapped.
    FilterBank wt(in_channels, w.batch, K);
    for (std::size_t j = 0; j < w.batch; ++j)
        for (std::size_t i = 0; i < in_channels; ++i)
            for (std::size_t k = 0; k < K; ++k) wt.at(i, j, k) = w.at(j, i, K - 1 - k);

    Tensor gx(grad_out.batch, in_channels, L);
    const std::ptrdiff_t nb = static_cast<std::ptrdiff_t>(grad_out.batch);
    const std::ptrdiff_t nc = static_cast<std::ptrdiff_t>(in_channels);
#pragma omp parallel for collapse(2) schedule(static)
    for (std::ptrdiff_t b = 0; b < nb; ++b)
        for (std::ptrdiff_t i = 0; i < nc; ++i) {
            double* o = gx.row(b, i);
            for (std::size_t j = 0; j < w.batch; ++j)
                accumulate_corr(o, grad_out.row(b, j), wt.row(i, j), K, flip_pad, L);
        }
    return gx;
}

FilterBank conv1d_grad_filters(const Tensor& x, const Tensor& grad_out, std::size_t kernel) {
    const std::size_t pad = (kernel - 1) / 2;
    const std::size_t L = x.length;
    FilterBank gw(grad_out.channels, x.channels, kernel);
    const std::ptrdiff_t nf = static_cast<std::ptrdiff_t>(grad_out.channels);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t j = 0; j < nf; ++j)
        for (std::size_t i = 0; i < x.channels; ++i)
            for (std::size_t k = 0; k < kernel; ++k) {
                const std::ptrdiff_t shift = static_cast<std::ptrdiff_t>(k) -
                                             static_cast<std::ptrdiff_t>(pad);
                const std::size_t t0 = shift < 0 ? static_cast<std::size_t>(-shift) : 0;
                const std::size_t t1 =
                    shift > 0 ? L - static_cast<std::size_t>(shift) : L;
                double acc = 0.0;
                for (std::size_t b = 0; b < x.batch; ++b) {
                    const double* g = grad_out.row(b, j);
                    // offset so the loop body indexes both arrays by t
                    const double* xr = x.row(b, i) + t0 + static_cast<std::size_t>(
                                                              static_cast<std::ptrdiff_t>(shift));
                    double local = 0.0;
#pragma omp simd reduction(+ : local)
                    for (std::size_t t = t0; t < t1; ++t) local += g[t] * xr[t - t0];
                    acc += local;
                }
                gw.at(j, i, k) = acc;
            }
    return gw;
}

void relu_inplace(Tensor& x) {
    for (auto& v : x.data) v = v > 0.0 ? v : 0.0;
}

void relu_backward_inplace(const Tensor& pre_activation, Tensor& grad) {
    for (std::size_t n = 0; n < grad.data.size(); ++n)
        if (pre_activation.data[n] <= 0.0) grad.data[n] = 0.0;
}

Tensor batch_norm_infer(const Tensor& x, const BatchNormState& bn) {
    const std::size_t C = x.channels;
    if (bn.channels() != C) throw std::invalid_argument("batch_norm: channel mismatch");
    if (x.batch == 0) throw std::invalid_argument("batch_norm: empty batch");
    const std::size_t L = x.length;
    Tensor y(x.batch, C, L);
    for (std::size_t c = 0; c < C; ++c) {
        const double inv = 1.0 / std::sqrt(bn.running_var[c] + bn.eps);
        const double g = bn.gamma[c] * inv;
        const double off = bn.beta[c] - g * bn.running_mean[c];
        for (std::size_t b = 0; b < x.batch; ++b) {
            const double* xr = x.row(b, c);
            double* yr = y.row(b, c);
            for (std::size_t t = 0; t < L; ++t) yr[t] = g * xr[t] + off;
        }
    }
    return y;
}

Tensor batch_norm(const Tensor& x, BatchNormState& bn, BnMode mode, BatchNormCache* cache) {
    if (mode == BnMode::Infer) return batch_norm_infer(x, bn);
    const std::size_t C = x.channels;
    if (bn.channels() != C) throw std::invalid_argument("batch_norm: channel mismatch");
    if (x.batch == 0) throw std::invalid_argument("batch_norm: empty batch");
    const std::size_t L = x.length;
    const double n = static_cast<double>(x.batch * L);
    Tensor y(x.batch, C, L);

    if (cache) {
        cache->mean.assign(C, 0.0);
        cache->inv_std.assign(C, 0.0);
        cache->x_hat = Tensor(x.batch, C, L);
    }
    const std::ptrdiff_t nc = static_cast<std::ptrdiff_t>(C);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t c = 0; c < nc; ++c) {
        double sum = 0.0, sq = 0.0;
        for (std::size_t b = 0; b < x.batch; ++b) {
            const double* xr = x.row(b, c);
            for (std::size_t t = 0; t < L; ++t) {
                sum += xr[t];
                sq += xr[t] * xr[t];
            }
        }
        const double mean = sum / n;
        const double var = std::max(0.0, sq / n - mean * mean);
        const double inv = 1.0 / std::sqrt(var + bn.eps);

        bn.running_mean[c] = (1.0 - bn.momentum) * bn.running_mean[c] + bn.momentum * mean;
        const double unbiased = n > 1.0 ? var * n / (n - 1.0) : var;
        bn.running_var[c] = (1.0 - bn.momentum) * bn.running_var[c] + bn.momentum * unbiased;

        const double g = bn.gamma[c];
        const double beta = bn.beta[c];
        for (std::size_t b = 0; b < x.batch; ++b) {
            const double* xr = x.row(b, c);
            double* yr = y.row(b, c);
            double* hr = cache ? cache->x_hat.row(b, c) : nullptr;
            for (std::size_t t = 0; t < L; ++t) {
                const double xh = (xr[t] - mean) * inv;
                if (hr) hr[t] = xh;
                yr[t] = g * xh + beta;
            }
        }
        if (cache) {
            cache->mean[c] = mean;
            cache->inv_std[c] = inv;
        }
    }
    return y;
}

Tensor batch_norm_backward(const Tensor& grad_out, const BatchNormCache& cache,
                           const BatchNormState& bn, std::vector<double>& grad_gamma,
                           std::vector<double>& grad_beta) {
    const std::size_t C = grad_out.channels;
    const std::size_t L = grad_out.length;
    const double n = static_cast<double>(grad_out.batch * L);
    grad_gamma.assign(C, 0.0);
    grad_beta.assign(C, 0.0);
    Tensor gx(grad_out.batch, C, L);
    const std::ptrdiff_t nc = static_cast<std::ptrdiff_t>(C);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t c = 0; c < nc; ++c) {
        double sum_g = 0.0, sum_gh = 0.0;
        for (std::size_t b = 0; b < grad_out.batch; ++b) {
            const double* gr = grad_out.row(b, c);
            const double* hr = cache.x_hat.row(b, c);
            for (std::size_t t = 0; t < L; ++t) {
                sum_g += gr[t];
                sum_gh += gr[t] * hr[t];
            }
        }
        grad_beta[c] = sum_g;
        grad_gamma[c] = sum_gh;
        const double scale = bn.gamma[c] * cache.inv_std[c] / n;
        for (std::size_t b = 0; b < grad_out.batch; ++b) {
            const double* gr = grad_out.row(b, c);
            const double* hr = cache.x_hat.row(b, c);
            double* gor = gx.row(b, c);
            for (std::size_t t = 0; t < L; ++t)
                gor[t] = scale * (n * gr[t] - sum_g - hr[t] * sum_gh);
        }
    }
    return gx;
}

std::vector<double> global_avg_pool(const Tensor& x) {
    std::vector<double> out(x.batch * x.channels);
    const double inv = 1.0 / static_cast<double>(x.length);
    for (std::size_t b = 0; b < x.batch; ++b)
        for (std::size_t c = 0; c < x.channels; ++c) {
            const double* xr = x.row(b, c);
            double s = 0.0;
            for (std::size_t t = 0; t < x.length; ++t) s += xr[t];
            out[b * x.channels + c] = s * inv;
        }
    return out;
}

Tensor global_avg_pool_backward(const std::vector<double>& grad_pooled, std::size_t batch,
                                std::size_t channels, std::size_t length) {
    Tensor gx(batch, channels, length);
    const double inv = 1.0 / static_cast<double>(length);
    for (std::size_t b = 0; b < batch; ++b)
        for (std::size_t c = 0; c < channels; ++c) {
            const double g = grad_pooled[b * channels + c] * inv;
            double* r = gx.row(b, c);
            for (std::size_t t = 0; t < length; ++t) r[t] = g;
        }
    return gx;
}

std::vector<double> dense_forward(const DenseLayer& d, const std::vector<double>& x,
                                  std::size_t batch) {
    std::vector<double> y(batch * d.out);
    for (std::size_t b = 0; b < batch; ++b)
        for (std::size_t o = 0; o < d.out; ++o) {
            const double* wr = d.weight.data() + o * d.in;
            const double* xr = x.data() + b * d.in;
            double s = d.bias[o];
            for (std::size_t i = 0; i < d.in; ++i) s += wr[i] * xr[i];
            y[b * d.out + o] = s;
        }
    return y;
}

void dense_backward(const DenseLayer& d, const std::vector<double>& x,
                    const std::vector<double>& grad_out, std::size_t batch,
                    std::vector<double>& grad_in, std::vector<double>& grad_w,
                    std::vector<double>& grad_b) {
    grad_in.assign(batch * d.in, 0.0);
    grad_w.assign(d.out * d.in, 0.0);
    grad_b.assign(d.out, 0.0);
    for (std::size_t b = 0; b < batch; ++b)
        for (std::size_t o = 0; o < d.out; ++o) {
            const double g = grad_out[b * d.out + o];
            grad_b[o] += g;
            const double* xr = x.data() + b * d.in;
            const double* wr = d.weight.data() + o * d.in;
            double* gwr = grad_w.data() + o * d.in;
            double* gir = grad_in.data() + b * d.in;
            for (std::size_t i = 0; i < d.in; ++i) {
                gwr[i] += g * xr[i];
                gir[i] += g * wr[i];
            }
        }
}

std::vector<double> softmax_rows(const std::vector<double>& logits, std::size_t batch,
                                 std::size_t k) {
    std::vector<double> p(batch * k);
    for (std::size_t b = 0; b < batch; ++b) {
        const double* l = logits.data() + b * k;
        double* pr = p.data() + b * k;
        double m = l[0];
        for (std::size_t i = 1; i < k; ++i) m = std::max(m, l[i]);
        double z = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            pr[i] = std::exp(l[i] - m);
            z += pr[i];
        }
        const double inv = 1.0 / z;
        for (std::size_t i = 0; i < k; ++i) pr[i] *= inv;
    }
    return p;
}

double cross_entropy(const std::vector<double>& logits, const std::vector<int>& labels,
                     std::size_t k, std::vector<double>* grad_logits) {
    const std::size_t batch = labels.size();
    const std::vector<double> p = softmax_rows(logits, batch, k);
    double loss = 0.0;
    if (grad_logits) grad_logits->assign(batch * k, 0.0);
    const double inv_b = 1.0 / static_cast<double>(batch);
    for (std::size_t b = 0; b < batch; ++b) {
        const int y = labels[b];
        if (y < 0 || static_cast<std::size_t>(y) >= k)
            throw std::invalid_argument("cross_entropy: label out of range");
        const double py = std::max(p[b * k + y], 1e-300);
        loss -= std::log(py);
        if (grad_logits)
            for (std::size_t i = 0; i < k; ++i)
                (*grad_logits)[b * k + i] =
                    (p[b * k + i] - (static_cast<std::size_t>(y) == i ? 1.0 : 0.0)) * inv_b;
    }
    return loss * inv_b;
}

}  // namespace coexlab::nn

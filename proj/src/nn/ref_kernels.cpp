#include "coexlab/nn/ref_kernels.hpp"

namespace coexlab::nn::ref {

Tensor conv1d(const Tensor& x, const FilterBank& w) {
    if (w.channels != x.channels) throw std::invalid_argument("conv1d: channel mismatch");
    const std::size_t K = w.length;
    const std::ptrdiff_t pad = static_cast<std::ptrdiff_t>((K - 1) / 2);
    Tensor out(x.batch, w.batch, x.length);
    for (std::size_t b = 0; b < x.batch; ++b)
        for (std::size_t j = 0; j < w.batch; ++j)
            for (std::size_t t = 0; t < x.length; ++t) {
                double acc = 0.0;
                for (std::size_t i = 0; i < x.channels; ++i)
                    for (std::size_t k = 0; k < K; ++k) {
                        const std::ptrdiff_t src =
                            static_cast<std::ptrdiff_t>(t + k) - pad;
                        if (src < 0 || src >= static_cast<std::ptrdiff_t>(x.length)) continue;
                        acc += x.at(b, i, static_cast<std::size_t>(src)) * w.at(j, i, k);
                    }
                out.at(b, j, t) = acc;
            }
    return out;
}

Tensor conv1d_grad_input(const Tensor& grad_out, const FilterBank& w, std::size_t in_channels) {
    const std::size_t K = w.length;
    const std::ptrdiff_t pad = static_cast<std::ptrdiff_t>((K - 1) / 2);
    Tensor gx(grad_out.batch, in_channels, grad_out.length);
    for (std::size_t b = 0; b < grad_out.batch; ++b)
        for (std::size_t i = 0; i < in_channels; ++i)
            for (std::size_t t = 0; t < grad_out.length; ++t) {
                double acc = 0.0;
                for (std::size_t j = 0; j < w.batch; ++j)
                    for (std::size_t k = 0; k < K; ++k) {
                        // out[t'] consumed x[t' + k - pad]; invert for x[t].
                        const std::ptrdiff_t dst =
                            static_cast<std::ptrdiff_t>(t) - static_cast<std::ptrdiff_t>(k) + pad;
                        if (dst < 0 || dst >= static_cast<std::ptrdiff_t>(grad_out.length)) continue;
                        acc += grad_out.at(b, j, static_cast<std::size_t>(dst)) * w.at(j, i, k);
                    }
                gx.at(b, i, t) = acc;
            }
    return gx;
}

FilterBank conv1d_grad_filters(const Tensor& x, const Tensor& grad_out, std::size_t kernel) {
    const std::ptrdiff_t pad = static_cast<std::ptrdiff_t>((kernel - 1) / 2);
    FilterBank gw(grad_out.channels, x.channels, kernel);
    for (std::size_t j = 0; j < grad_out.channels; ++j)
        for (std::size_t i = 0; i < x.channels; ++i)
            for (std::size_t k = 0; k < kernel; ++k) {
                double acc = 0.0;
                for (std::size_t b = 0; b < x.batch; ++b)
                    for (std::size_t t = 0; t < x.length; ++t) {
                        const std::ptrdiff_t src =
                            static_cast<std::ptrdiff_t>(t + k) - pad;
                        if (src < 0 || src >= static_cast<std::ptrdiff_t>(x.length)) continue;
                        acc += grad_out.at(b, j, t) * x.at(b, i, static_cast<std::size_t>(src));
                    }
                gw.at(j, i, k) = acc;
            }
    return gw;
}

}  // namespace coexlab::nn::ref

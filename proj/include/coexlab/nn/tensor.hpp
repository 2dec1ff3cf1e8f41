#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace coexlab::nn {

// Dense (batch, channels, length) tensor, row-major, contiguous doubles.
struct Tensor {
    std::size_t batch = 0;
    std::size_t channels = 0;
    std::size_t length = 0;
    std::vector<double> data;

    Tensor() = default;
    Tensor(std::size_t b, std::size_t c, std::size_t l)
        : batch(b), channels(c), length(l), data(b * c * l, 0.0) {}

    std::size_t size() const { return batch * channels * length; }

    double* row(std::size_t b, std::size_t c) { return data.data() + (b * channels + c) * length; }
    const double* row(std::size_t b, std::size_t c) const {
        return data.data() + (b * channels + c) * length;
    }

    double& at(std::size_t b, std::size_t c, std::size_t l) {
        return data[(b * channels + c) * length + l];
    }
    double at(std::size_t b, std::size_t c, std::size_t l) const {
        return data[(b * channels + c) * length + l];
    }

    void require_shape(std::size_t b, std::size_t c, std::size_t l, const char* what) const {
        if (batch != b || channels != c || length != l)
            throw std::invalid_argument(std::string("shape mismatch in ") + what);
    }
};

// Filter bank shaped (filters, in_channels, kernel); reuses Tensor storage
// with batch standing in for the filter index.
using FilterBank = Tensor;

}  // namespace coexlab::nn

#include "coexlab/nn/fft_conv.hpp"

#include <algorithm>
#include <complex>
#include <stdexcept>

#include "coexlab/nn/fft.hpp"

namespace coexlab::nn {

double SpectralMask::compression_rate(std::size_t fft_len) const {
    const std::size_t total = fft_len / 2 + 1;
    const std::size_t kept = std::min(cutoff, fft_len / 2) + 1;
    return static_cast<double>(total - kept) / static_cast<double>(total);
}

SpectralMask SpectralMask::from_compression(double rate, std::size_t fft_len) {
    if (rate < 0.0 || rate >= 1.0) throw std::invalid_argument("compression rate outside [0,1)");
    const std::size_t total = fft_len / 2 + 1;
    const auto kept = static_cast<std::size_t>(
        std::max(1.0, std::ceil((1.0 - rate) * static_cast<double>(total))));
    return SpectralMask{kept - 1};
}

Tensor fft_conv1d(const Tensor& x, const FilterBank& w, const SpectralMask& mask,
                  bool* degenerate) {
    if (w.channels != x.channels) throw std::invalid_argument("fft_conv1d: channel mismatch");
    const std::size_t L = x.length;
    const std::size_t K = w.length;
    const std::size_t pad = (K - 1) / 2;
    const std::size_t N = next_pow2(L + K - 1);
    if (mask.cutoff > N) throw std::invalid_argument("fft_conv1d: cutoff beyond transform length");
    if (degenerate) *degenerate = (mask.cutoff == 0);

    const std::size_t half = N / 2;
    const std::size_t top = std::min(mask.cutoff, half);

    // Filter spectra, conjugated once so the pointwise stage is a plain
    // multiply-accumulate (correlation = conj(F_w) * F_x).
    std::vector<std::vector<std::complex<double>>> wspec(w.batch * w.channels);
    for (std::size_t j = 0; j < w.batch; ++j)
        for (std::size_t i = 0; i < w.channels; ++i) {
            std::vector<std::complex<double>> buf(N, {0.0, 0.0});
            const double* wr = w.row(j, i);
            for (std::size_t k = 0; k < K; ++k) buf[k] = wr[k];
            fft(buf, false);
            for (auto& z : buf) z = std::conj(z);
            wspec[j * w.channels + i] = std::move(buf);
        }

    Tensor out(x.batch, w.batch, L);
    std::vector<std::vector<std::complex<double>>> xspec(x.channels);
    std::vector<std::complex<double>> acc(N);
    for (std::size_t b = 0; b < x.batch; ++b) {
        for (std::size_t i = 0; i < x.channels; ++i) {
            std::vector<std::complex<double>> buf(N, {0.0, 0.0});
            const double* xr = x.row(b, i);
            for (std::size_t t = 0; t < L; ++t) buf[t] = xr[t];
            fft(buf, false);
            xspec[i] = std::move(buf);
        }
        for (std::size_t j = 0; j < w.batch; ++j) {
            std::fill(acc.begin(), acc.end(), std::complex<double>(0.0, 0.0));
            for (std::size_t i = 0; i < x.channels; ++i) {
                const auto& ws = wspec[j * w.channels + i];
                const auto& xs = xspec[i];
                // Surviving bins only; the mirror half is restored from
                // conjugate symmetry below.
                for (std::size_t o = 0; o <= top; ++o) acc[o] += ws[o] * xs[o];
            }
            for (std::size_t o = 1; o < half; ++o)
                if (o <= top) acc[N - o] = std::conj(acc[o]);
            if (top < half) acc[half] = 0.0;
            fft(acc, true);
            double* orow = out.row(b, j);
            for (std::size_t t = 0; t < L; ++t) {
                // conv1d's output index t corresponds to correlation lag t - pad
                const std::size_t src = (t + N - pad) & (N - 1);
                orow[t] = acc[src].real();
            }
        }
    }
    return out;
}

}  // namespace coexlab::nn

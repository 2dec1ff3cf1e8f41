// Compares the OpenMP layer kernels against the serial reference
// implementations: correctness drift and wall-clock speedup.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "coexlab/nn/fft.hpp"
#include "coexlab/nn/fft_conv.hpp"
#include "coexlab/nn/kernels.hpp"
#include "coexlab/nn/ref_kernels.hpp"
#include "coexlab/rng.hpp"

namespace {

using namespace coexlab;
using Clock = std::chrono::steady_clock;

double time_of(const std::function<void()>& fn, int reps) {
    fn();  // warm-up
    const auto t0 = Clock::now();
    for (int i = 0; i < reps; ++i) fn();
    const auto t1 = Clock::now();
    return std::chrono::duration<double>(t1 - t0).count() / reps;
}

double max_abs_diff(const nn::Tensor& a, const nn::Tensor& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.data.size(); ++i)
        m = std::max(m, std::abs(a.data[i] - b.data[i]));
    return m;
}

void fill(nn::Tensor& t, Rng& rng) {
    for (auto& v : t.data) v = rng.normal();
}

struct Case {
    std::size_t batch, in_ch, out_ch, kernel, length;
};

}  // namespace

int main() {
#ifdef _OPENMP
    std::printf("threads: %d\n", omp_get_max_threads());
#else
    std::printf("threads: 1 (no OpenMP)\n");
#endif
    std::printf("%-34s %12s %12s %9s %12s\n", "case", "serial_ms", "parallel_ms", "speedup",
                "max_diff");

    const Case cases[] = {
        {8, 1, 128, 8, 512},    // FCN block 1
        {8, 128, 256, 5, 512},  // FCN block 2
        {8, 256, 128, 3, 512},  // FCN block 3
        {32, 16, 32, 5, 256},
    };
    Rng rng(7);
    for (const auto& c : cases) {
        nn::Tensor x(c.batch, c.in_ch, c.length);
        nn::FilterBank w(c.out_ch, c.in_ch, c.kernel);
        fill(x, rng);
        fill(w, rng);

        nn::Tensor ref_out, par_out;
        const int reps = c.in_ch >= 128 ? 1 : 3;
        const double t_ref = time_of([&] { ref_out = nn::ref::conv1d(x, w); }, reps);
        const double t_par = time_of([&] { par_out = nn::conv1d(x, w); }, reps);
        char name[64];
        std::snprintf(name, sizeof(name), "conv1d b%zu c%zu f%zu k%zu L%zu", c.batch, c.in_ch,
                      c.out_ch, c.kernel, c.length);
        std::printf("%-34s %12.3f %12.3f %8.2fx %12.3e\n", name, t_ref * 1e3, t_par * 1e3,
                    t_ref / t_par, max_abs_diff(ref_out, par_out));
    }

    // grad kernels on the mid-size case
    {
        const Case c = cases[3];
        nn::Tensor x(c.batch, c.in_ch, c.length);
        nn::FilterBank w(c.out_ch, c.in_ch, c.kernel);
        nn::Tensor gy(c.batch, c.out_ch, c.length);
        fill(x, rng);
        fill(w, rng);
        fill(gy, rng);

        nn::Tensor ref_gx, par_gx;
        double t_ref = time_of([&] { ref_gx = nn::ref::conv1d_grad_input(gy, w, c.in_ch); }, 3);
        double t_par = time_of([&] { par_gx = nn::conv1d_grad_input(gy, w, c.in_ch); }, 3);
        std::printf("%-34s %12.3f %12.3f %8.2fx %12.3e\n", "conv1d_grad_input", t_ref * 1e3,
                    t_par * 1e3, t_ref / t_par, max_abs_diff(ref_gx, par_gx));

        nn::FilterBank ref_gw, par_gw;
        t_ref = time_of([&] { ref_gw = nn::ref::conv1d_grad_filters(x, gy, c.kernel); }, 3);
        t_par = time_of([&] { par_gw = nn::conv1d_grad_filters(x, gy, c.kernel); }, 3);
        std::printf("%-34s %12.3f %12.3f %8.2fx %12.3e\n", "conv1d_grad_filters", t_ref * 1e3,
                    t_par * 1e3, t_ref / t_par, max_abs_diff(ref_gw, par_gw));
    }

    // spectral path against the direct path, full band
    {
        nn::Tensor x(4, 8, 300);
        nn::FilterBank w(16, 8, 5);
        fill(x, rng);
        fill(w, rng);
        nn::Tensor direct, spectral;
        const double t_dir = time_of([&] { direct = nn::conv1d(x, w); }, 3);
        const auto mask = nn::SpectralMask::full(nn::next_pow2(300 + 5 - 1));
        const double t_fft = time_of([&] { spectral = nn::fft_conv1d(x, w, mask); }, 3);
        std::printf("%-34s %12.3f %12.3f %8.2fx %12.3e\n", "fft_conv1d (vs direct)", t_dir * 1e3,
                    t_fft * 1e3, t_dir / t_fft, max_abs_diff(direct, spectral));
    }
    return 0;
}

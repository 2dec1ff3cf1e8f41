#include "coexlab/nn/grad_check.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "coexlab/nn/kernels.hpp"
#include "coexlab/rng.hpp"

namespace coexlab::nn {
namespace {

void check_step(double h) {
    if (h < 1e-6 || h > 1e-3) throw std::invalid_argument("grad_check: h outside [1e-6, 1e-3]");
}

double rel_err(double a, double b) {
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-6});
}

// Central difference of `loss` along every coordinate of `theta`, compared
// against the provided analytic gradient.
double max_rel_err(std::vector<double>& theta, const std::vector<double>& analytic,
                   const std::function<double()>& loss, double h) {
    double worst = 0.0;
    for (std::size_t i = 0; i < theta.size(); ++i) {
        const double keep = theta[i];
        theta[i] = keep + h;
        const double up = loss();
        theta[i] = keep - h;
        const double dn = loss();
        theta[i] = keep;
        const double numeric = (up - dn) / (2.0 * h);
        worst = std::max(worst, rel_err(analytic[i], numeric));
    }
    return worst;
}

void fill(std::vector<double>& v, Rng& rng, double scale = 1.0) {
    for (auto& x : v) x = rng.normal() * scale;
}

}  // namespace

double grad_check_conv1d(std::size_t batch, std::size_t channels, std::size_t filters,
                         std::size_t kernel, std::size_t length, double h, std::uint64_t seed) {
    check_step(h);
    Rng rng(seed);
    Tensor x(batch, channels, length);
    FilterBank w(filters, channels, kernel);
    Tensor proj(batch, filters, length);  // random projection defining a scalar loss
    fill(x.data, rng);
    fill(w.data, rng);
    fill(proj.data, rng);

    auto loss = [&]() {
        const Tensor out = conv1d(x, w);
        double s = 0.0;
        for (std::size_t n = 0; n < out.data.size(); ++n) s += out.data[n] * proj.data[n];
        return s;
    };

    const Tensor gx = conv1d_grad_input(proj, w, channels);
    const FilterBank gw = conv1d_grad_filters(x, proj, kernel);

    double worst = max_rel_err(x.data, gx.data, loss, h);
    worst = std::max(worst, max_rel_err(w.data, gw.data, loss, h));
    return worst;
}

double grad_check_batch_norm(std::size_t batch, std::size_t channels, std::size_t length,
                             double h, std::uint64_t seed) {
    check_step(h);
    Rng rng(seed);
    Tensor x(batch, channels, length);
    Tensor proj(batch, channels, length);
    BatchNormState bn(channels);
    fill(x.data, rng);
    fill(proj.data, rng);
    fill(bn.gamma, rng, 0.5);
    for (auto& g : bn.gamma) g += 1.0;
    fill(bn.beta, rng, 0.5);

    auto loss = [&]() {
        BatchNormState local = bn;  // running stats are updated in train mode
        const Tensor out = batch_norm(x, local, BnMode::Train);
        double s = 0.0;
        for (std::size_t n = 0; n < out.data.size(); ++n) s += out.data[n] * proj.data[n];
        return s;
    };

    BatchNormState state = bn;
    BatchNormCache cache;
    batch_norm(x, state, BnMode::Train, &cache);
    std::vector<double> ggamma, gbeta;
    const Tensor gx = batch_norm_backward(proj, cache, bn, ggamma, gbeta);

    double worst = max_rel_err(x.data, gx.data, loss, h);
    worst = std::max(worst, max_rel_err(bn.gamma, ggamma, loss, h));
    worst = std::max(worst, max_rel_err(bn.beta, gbeta, loss, h));
    return worst;
}

double grad_check_dense_softmax_ce(std::size_t batch, std::size_t in, std::size_t classes,
                                   double h, std::uint64_t seed) {
    check_step(h);
    Rng rng(seed);
    DenseLayer d(in, classes);
    std::vector<double> x(batch * in);
    std::vector<int> labels(batch);
    fill(d.weight, rng);
    fill(d.bias, rng, 0.1);
    fill(x, rng);
    for (auto& l : labels) l = static_cast<int>(rng.next_below(classes));

    auto loss = [&]() {
        const std::vector<double> logits = dense_forward(d, x, batch);
        return cross_entropy(logits, labels, classes);
    };

    std::vector<double> grad_logits;
    {
        const std::vector<double> logits = dense_forward(d, x, batch);
        cross_entropy(logits, labels, classes, &grad_logits);
    }
    std::vector<double> gx, gw, gb;
    dense_backward(d, x, grad_logits, batch, gx, gw, gb);

    double worst = max_rel_err(x, gx, loss, h);
    worst = std::max(worst, max_rel_err(d.weight, gw, loss, h));
    worst = std::max(worst, max_rel_err(d.bias, gb, loss, h));
    return worst;
}

}  // namespace coexlab::nn

#include "coexlab/nn/model.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "coexlab/nn/fft.hpp"
#include "coexlab/nn/fft_conv.hpp"
#include "coexlab/rng.hpp"

namespace coexlab::nn {
namespace {

void fill_uniform_fan_in(std::vector<double>& v, std::size_t fan_in, Rng& rng) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
    for (auto& x : v) x = rng.uniform(-bound, bound);
}

}  // namespace

FcnModel FcnModel::make(std::size_t width, std::size_t classes, std::uint64_t seed) {
    if (width == 0 || classes < 2) throw std::invalid_argument("FcnModel: bad width or classes");
    FcnModel m;
    m.width = width;
    m.classes = classes;
    Rng rng(seed);
    std::size_t in_ch = 1;
    for (std::size_t blk = 0; blk < 3; ++blk) {
        const std::size_t f = kFcnFilters[blk];
        const std::size_t k = kFcnKernels[blk];
        m.blocks[blk].filters = FilterBank(f, in_ch, k);
        fill_uniform_fan_in(m.blocks[blk].filters.data, in_ch * k, rng);
        m.blocks[blk].bn = BatchNormState(f);
        in_ch = f;
    }
    m.head = DenseLayer(in_ch, classes);
    fill_uniform_fan_in(m.head.weight, in_ch, rng);
    fill_uniform_fan_in(m.head.bias, in_ch, rng);
    return m;
}

std::vector<double> fcn_forward(const FcnModel& model, const Tensor& batch) {
    if (batch.length != model.width)
        throw std::invalid_argument("fcn_forward: input width does not match model");
    Tensor x = batch;
    for (const auto& blk : model.blocks) {
        Tensor z = conv1d(x, blk.filters);
        x = batch_norm_infer(z, blk.bn);
        relu_inplace(x);
    }
    const std::vector<double> pooled = global_avg_pool(x);
    return dense_forward(model.head, pooled, x.batch);
}

std::vector<double> fcn_forward_train(FcnModel& model, const Tensor& batch, ForwardCache& cache) {
    if (batch.length != model.width)
        throw std::invalid_argument("fcn_forward_train: input width does not match model");
    cache.input = batch;
    Tensor x = batch;
    for (std::size_t blk = 0; blk < 3; ++blk) {
        cache.conv_out[blk] = conv1d(x, model.blocks[blk].filters);
        cache.bn_out[blk] =
            batch_norm(cache.conv_out[blk], model.blocks[blk].bn, BnMode::Train, &cache.bn[blk]);
        x = cache.bn_out[blk];
        relu_inplace(x);
        cache.act[blk] = x;
    }
    cache.pooled = global_avg_pool(x);
    cache.logits = dense_forward(model.head, cache.pooled, x.batch);
    return cache.logits;
}

std::vector<double> fcn_forward_compressed(const FcnModel& model, const Tensor& batch,
                                           double compression_rate) {
    if (batch.length != model.width)
        throw std::invalid_argument("fcn_forward_compressed: input width does not match model");
    Tensor x = batch;
    for (const auto& blk : model.blocks) {
        const std::size_t n = next_pow2(x.length + blk.filters.length - 1);
        const auto mask = SpectralMask::from_compression(compression_rate, n);
        Tensor z = fft_conv1d(x, blk.filters, mask);
        x = batch_norm_infer(z, blk.bn);
        relu_inplace(x);
    }
    const std::vector<double> pooled = global_avg_pool(x);
    return dense_forward(model.head, pooled, x.batch);
}

std::vector<int> argmax_rows(const std::vector<double>& logits, std::size_t batch,
                             std::size_t k) {
    std::vector<int> out(batch, 0);
    for (std::size_t b = 0; b < batch; ++b) {
        const double* row = logits.data() + b * k;
        int best = 0;
        for (std::size_t i = 1; i < k; ++i)
            if (row[i] > row[best]) best = static_cast<int>(i);
        out[b] = best;
    }
    return out;
}

namespace {

constexpr char kMagic[8] = {'C', 'O', 'E', 'X', 'F', 'C', 'N', '\0'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void put(std::ofstream& out, const T& v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

void put_vec(std::ofstream& out, const std::vector<double>& v) {
    put(out, static_cast<std::uint64_t>(v.size()));
    out.write(reinterpret_cast<const char*>(v.data()),
              static_cast<std::streamsize>(v.size() * sizeof(double)));
}

template <typename T>
T get(std::ifstream& in) {
    T v{};
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!in) throw std::runtime_error("model file truncated");
    return v;
}

std::vector<double> get_vec(std::ifstream& in) {
    const auto n = get<std::uint64_t>(in);
    std::vector<double> v(n);
    in.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(n * sizeof(double)));
    if (!in) throw std::runtime_error("model file truncated");
    return v;
}

}  // namespace

void save_model(const FcnModel& model, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out.write(kMagic, sizeof(kMagic));
    put(out, kVersion);
    put(out, static_cast<std::uint64_t>(model.width));
    put(out, static_cast<std::uint64_t>(model.classes));
    for (const auto& blk : model.blocks) {
        put(out, static_cast<std::uint64_t>(blk.filters.batch));
        put(out, static_cast<std::uint64_t>(blk.filters.channels));
        put(out, static_cast<std::uint64_t>(blk.filters.length));
        put_vec(out, blk.filters.data);
        put_vec(out, blk.bn.gamma);
        put_vec(out, blk.bn.beta);
        put_vec(out, blk.bn.running_mean);
        put_vec(out, blk.bn.running_var);
        put(out, blk.bn.eps);
        put(out, blk.bn.momentum);
    }
    put(out, static_cast<std::uint64_t>(model.head.in));
    put(out, static_cast<std::uint64_t>(model.head.out));
    put_vec(out, model.head.weight);
    put_vec(out, model.head.bias);
    put(out, model.norm.mu);
    put(out, model.norm.sigma);
    put(out, model.norm.outlier_k);
    put(out, static_cast<std::uint8_t>(model.norm.from_training ? 1 : 0));
    if (!out) throw std::runtime_error("write failed: " + path);
}

FcnModel load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open model: " + path);
    char magic[8];
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
        throw std::runtime_error("not a model file: " + path);
    const auto version = get<std::uint32_t>(in);
    if (version != kVersion)
        throw std::runtime_error("unsupported model version " + std::to_string(version));
    FcnModel m;
    m.width = get<std::uint64_t>(in);
    m.classes = get<std::uint64_t>(in);
    for (auto& blk : m.blocks) {
        const auto f = get<std::uint64_t>(in);
        const auto c = get<std::uint64_t>(in);
        const auto k = get<std::uint64_t>(in);
        blk.filters = FilterBank(f, c, k);
        blk.filters.data = get_vec(in);
        if (blk.filters.data.size() != f * c * k)
            throw std::runtime_error("model file corrupt: filter size");
        blk.bn = BatchNormState(f);
        blk.bn.gamma = get_vec(in);
        blk.bn.beta = get_vec(in);
        blk.bn.running_mean = get_vec(in);
        blk.bn.running_var = get_vec(in);
        blk.bn.eps = get<double>(in);
        blk.bn.momentum = get<double>(in);
        if (blk.bn.gamma.size() != f || blk.bn.running_var.size() != f)
            throw std::runtime_error("model file corrupt: batch-norm size");
    }
    m.head.in = get<std::uint64_t>(in);
    m.head.out = get<std::uint64_t>(in);
    m.head.weight = get_vec(in);
    m.head.bias = get_vec(in);
    if (m.head.weight.size() != m.head.in * m.head.out || m.head.bias.size() != m.head.out)
        throw std::runtime_error("model file corrupt: head size");
    m.norm.mu = get<double>(in);
    m.norm.sigma = get<double>(in);
    m.norm.outlier_k = get<double>(in);
    m.norm.from_training = get<std::uint8_t>(in) != 0;
    return m;
}

}  // namespace coexlab::nn

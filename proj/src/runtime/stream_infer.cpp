#include <stdexcept>

#include "coexlab/data/normalize.hpp"
#include "coexlab/runtime/runtime.hpp"

namespace coexlab::rt {
namespace {

int classify_window(const nn::FcnModel& model, const std::vector<double>& raw) {
    std::vector<double> v = raw;
    data::clip_outliers_inplace(v, model.norm);
    data::normalize_inplace(v, model.norm);
    nn::Tensor x(1, 1, v.size());
    std::copy(v.begin(), v.end(), x.row(0, 0));
    const auto logits = nn::fcn_forward(model, x);
    return nn::argmax_rows(logits, 1, model.classes)[0];
}

}  // namespace

StreamInference::StreamInference(const nn::FcnModel& model, std::size_t stride)
    : model_(model), stride_(stride) {
    if (stride == 0 || stride > model.width)
        throw std::invalid_argument("stream_infer: stride must be in [1, width]");
    if (model.width == 0 || !model.norm.from_training)
        throw std::invalid_argument("stream_infer: model lacks width or training stats");
}

std::optional<detect::Decision> StreamInference::push(double t, double dbm) {
    buffer_.push_back(dbm);
    if (buffer_.size() > model_.width) buffer_.pop_front();
    if (buffer_.size() < model_.width) return std::nullopt;
    if (primed_) {
        if (++since_last_ < stride_) return std::nullopt;
    }
    primed_ = true;
    since_last_ = 0;
    const std::vector<double> window(buffer_.begin(), buffer_.end());
    return detect::Decision{t, classify_window(model_, window)};
}

void StreamInference::reset() {
    buffer_.clear();
    since_last_ = 0;
    primed_ = false;
}

std::vector<detect::Decision> stream_infer(const nn::FcnModel& model,
                                           const std::vector<sim::EnergySample>& samples,
                                           std::size_t stride) {
    StreamInference s(model, stride);
    std::vector<detect::Decision> out;
    for (const auto& smp : samples)
        if (auto d = s.push(smp.t, smp.dbm)) out.push_back(*d);
    return out;
}

std::vector<detect::Decision> batch_infer(const nn::FcnModel& model,
                                          const std::vector<sim::EnergySample>& samples,
                                          std::size_t stride) {
    std::vector<detect::Decision> out;
    if (samples.size() < model.width) return out;
    std::vector<double> window(model.width);
    for (std::size_t end = model.width; end <= samples.size(); end += stride) {
        for (std::size_t i = 0; i < model.width; ++i)
            window[i] = samples[end - model.width + i].dbm;
        out.push_back({samples[end - 1].t, classify_window(model, window)});
    }
    return out;
}

}  // namespace coexlab::rt

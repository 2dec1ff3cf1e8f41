#include "coexlab/data/normalize.hpp"

#include <cmath>
#include <stdexcept>

namespace coexlab::data {

NormStats compute_norm_stats(std::span<const double> training_values, double outlier_k) {
    if (training_values.empty())
        throw std::invalid_argument("compute_norm_stats: empty training set");
    double sum = 0.0;
    for (double v : training_values) sum += v;
    const double mu = sum / static_cast<double>(training_values.size());
    double sq = 0.0;
    for (double v : training_values) sq += (v - mu) * (v - mu);
    NormStats s;
    s.mu = mu;
    s.sigma = std::sqrt(sq / static_cast<double>(training_values.size()));
    s.outlier_k = outlier_k;
    s.from_training = true;
    return s;
}

void clip_outliers_inplace(std::span<double> values, const NormStats& stats) {
    const double bound = stats.outlier_k * stats.sigma;
    for (double& v : values)
        if (std::abs(v - stats.mu) > bound) v = stats.mu;
}

std::vector<double> clip_outliers(std::vector<double> values, const NormStats& stats) {
    clip_outliers_inplace(values, stats);
    return values;
}

void normalize_inplace(std::span<double> values, const NormStats& stats) {
    if (!(stats.sigma > 0.0)) throw std::domain_error("normalize: sigma must be positive");
    const double inv = 1.0 / stats.sigma;
    for (double& v : values) v = (v - stats.mu) * inv;
}

std::vector<double> normalize(std::vector<double> values, const NormStats& stats) {
    normalize_inplace(values, stats);
    return values;
}

std::vector<double> denormalize(std::vector<double> values, const NormStats& stats) {
    for (double& v : values) v = v * stats.sigma + stats.mu;
    return values;
}

}  // namespace coexlab::data

#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace coexlab::data {

// Training-set statistics used for outlier clipping and (D - mu) / sigma
// normalization. from_training is a provenance tag: downstream consumers
// assert it so test data can never leak into the stats.
struct NormStats {
    double mu = 0.0;
    double sigma = 1.0;
    double outlier_k = 4.0;
    bool from_training = false;
};

NormStats compute_norm_stats(std::span<const double> training_values, double outlier_k = 4.0);

// Values farther than outlier_k * sigma from mu are replaced by mu.
std::vector<double> clip_outliers(std::vector<double> values, const NormStats& stats);
void clip_outliers_inplace(std::span<double> values, const NormStats& stats);

// Elementwise (v - mu) / sigma; sigma <= 0 is a domain error.
std::vector<double> normalize(std::vector<double> values, const NormStats& stats);
void normalize_inplace(std::span<double> values, const NormStats& stats);

std::vector<double> denormalize(std::vector<double> values, const NormStats& stats);

}  // namespace coexlab::data

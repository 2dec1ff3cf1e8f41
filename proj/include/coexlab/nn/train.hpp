#pragma once

#include <cstdint>
#include <vector>

#include "coexlab/data/chunker.hpp"
#include "coexlab/nn/model.hpp"

namespace coexlab::nn {

enum class Optimizer { Sgd, Adam };

struct TrainConfig {
    Optimizer optimizer = Optimizer::Sgd;
    double lr = 1e-4;  // SGD default; Adam conventionally runs at 1e-3
    double momentum = 0.9;
    double weight_decay = 1e-4;
    std::size_t batch = 32;
    std::size_t epochs = 100;
    double plateau_factor = 0.5;
    std::size_t plateau_patience = 50;  // epochs without val-loss improvement
    double plateau_threshold = 1e-4;
    double val_fraction = 0.1;  // carved from the train set when no val set is given
    std::uint64_t seed = 1;
};

struct EpochStats {
    double train_loss = 0.0, train_acc = 0.0;
    double val_loss = 0.0, val_acc = 0.0;
    double lr = 0.0;
};

struct TrainHistory {
    std::vector<EpochStats> epochs;
};

// Minimizes cross-entropy with weight decay; the plateau scheduler halves
// the learning rate after `plateau_patience` epochs without val-loss
// improvement. Chunks are expected already normalized. Deterministic per
// cfg.seed. Throws on NaN loss with epoch/batch diagnostics.
TrainHistory train(FcnModel& model, const std::vector<data::LabeledChunk>& train_set,
                   const std::vector<data::LabeledChunk>& val_set, const TrainConfig& cfg);

struct EvalResult {
    double loss = 0.0;
    double accuracy = 0.0;
};

EvalResult evaluate(const FcnModel& model, const std::vector<data::LabeledChunk>& set,
                    std::size_t batch = 64);

EvalResult evaluate_compressed(const FcnModel& model, const std::vector<data::LabeledChunk>& set,
                               double compression_rate, std::size_t batch = 64);

// Assembles chunks[index[i]] for i in [lo, hi) into a (hi-lo, 1, w) tensor.
Tensor make_batch(const std::vector<data::LabeledChunk>& chunks,
                  const std::vector<std::size_t>& index, std::size_t lo, std::size_t hi,
                  std::vector<int>* labels);

void write_history_csv(const TrainHistory& history, const std::string& path);

}  // namespace coexlab::nn

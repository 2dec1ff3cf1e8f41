#include <doctest.h>

#include <limits>
#include <stdexcept>

#include <cmath>

#include "coexlab/nn/train.hpp"
#include "coexlab/rng.hpp"

using namespace coexlab;
using namespace coexlab::nn;

namespace {

// two cleanly separable classes: level-shifted noisy sinusoids
std::vector<data::LabeledChunk> toy_set(std::size_t n, std::size_t w, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<data::LabeledChunk> out;
    for (std::size_t i = 0; i < n; ++i) {
        data::LabeledChunk c;
        c.label = static_cast<int>(i % 2);
        c.values.resize(w);
        const double shift = c.label == 0 ? -1.0 : 1.0;
        for (std::size_t t = 0; t < w; ++t)
            c.values[t] = shift + 0.3 * rng.normal();
        out.push_back(std::move(c));
    }
    return out;
}

TrainConfig quick_cfg(std::size_t epochs, std::uint64_t seed) {
    TrainConfig cfg;
    cfg.optimizer = Optimizer::Adam;
    cfg.lr = 1e-3;
    cfg.epochs = epochs;
    cfg.batch = 16;
    cfg.seed = seed;
    return cfg;
}

}  // namespace

TEST_CASE("separable toy task trains to high accuracy quickly") {
    const auto train_set = toy_set(160, 32, 1);
    const auto test_set = toy_set(80, 32, 2);
    auto model = FcnModel::make(32, 2, 3);
    model.norm.from_training = true;
    const auto history = train(model, train_set, {}, quick_cfg(5, 4));
    CHECK(history.epochs.size() == 5);
    const auto ev = evaluate(model, test_set);
    CHECK(ev.accuracy >= 0.99);
}

TEST_CASE("zero learning rate leaves parameters untouched") {
    const auto train_set = toy_set(64, 16, 5);
    auto model = FcnModel::make(16, 2, 6);
    const auto before = model.blocks[0].filters.data;
    const auto head_before = model.head.weight;
    auto cfg = quick_cfg(2, 7);
    cfg.lr = 0.0;
    const auto history = train(model, train_set, {}, cfg);
    CHECK(model.blocks[0].filters.data == before);
    CHECK(model.head.weight == head_before);
    // loss stays flat apart from batch-norm running-stat drift
    CHECK(history.epochs.size() == 2);
}

TEST_CASE("training is deterministic per seed") {
    const auto train_set = toy_set(96, 16, 11);
    auto m1 = FcnModel::make(16, 2, 21);
    auto m2 = FcnModel::make(16, 2, 21);
    const auto cfg = quick_cfg(3, 9);
    train(m1, train_set, {}, cfg);
    train(m2, train_set, {}, cfg);
    REQUIRE(m1.head.weight == m2.head.weight);
    for (int b = 0; b < 3; ++b)
        REQUIRE(m1.blocks[b].filters.data == m2.blocks[b].filters.data);
}

TEST_CASE("labels outside the class range are rejected") {
    auto bad = toy_set(20, 16, 13);
    bad[3].label = 7;
    auto model = FcnModel::make(16, 2, 1);
    CHECK_THROWS_AS(train(model, bad, {}, quick_cfg(1, 1)), std::invalid_argument);
}

TEST_CASE("non-finite inputs are rejected up front") {
    auto train_set = toy_set(32, 16, 17);
    train_set[0].values[0] = std::numeric_limits<double>::quiet_NaN();
    auto model = FcnModel::make(16, 2, 2);
    CHECK_THROWS_WITH_AS(train(model, train_set, {}, quick_cfg(1, 1)),
                         doctest::Contains("non-finite"), std::invalid_argument);
}

TEST_CASE("non-finite loss aborts with diagnostics") {
    auto train_set = toy_set(32, 16, 17);
    auto model = FcnModel::make(16, 2, 2);
    // a poisoned parameter drives the loss itself to NaN
    model.head.bias[0] = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_WITH_AS(train(model, train_set, {}, quick_cfg(1, 1)),
                         doctest::Contains("non-finite loss"), std::runtime_error);
}

TEST_CASE("plateau scheduler halves the learning rate after stale epochs") {
    // a vanishing lr keeps the val loss flat, so the scheduler must fire
    // every `patience` epochs
    const auto train_set = toy_set(64, 16, 19);
    const auto val_set = toy_set(32, 16, 20);
    auto model = FcnModel::make(16, 2, 23);
    TrainConfig cfg = quick_cfg(7, 31);
    cfg.lr = 1e-12;
    cfg.plateau_patience = 2;
    const auto history = train(model, train_set, val_set, cfg);
    REQUIRE(history.epochs.size() == 7);
    CHECK(history.epochs[2].lr == doctest::Approx(1e-12));
    CHECK(history.epochs[3].lr == doctest::Approx(0.5e-12));
    CHECK(history.epochs[5].lr == doctest::Approx(0.25e-12));
}

TEST_CASE("sgd with momentum also learns the toy task") {
    const auto train_set = toy_set(160, 32, 29);
    auto model = FcnModel::make(32, 2, 31);
    TrainConfig cfg;
    cfg.optimizer = Optimizer::Sgd;
    cfg.lr = 1e-2;  // toy task tolerates a hot rate
    cfg.epochs = 8;
    cfg.batch = 16;
    cfg.seed = 3;
    const auto history = train(model, train_set, {}, cfg);
    CHECK(history.epochs.back().train_acc >= 0.95);
}

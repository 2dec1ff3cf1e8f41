#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "coexlab/data/normalize.hpp"
#include "coexlab/nn/train.hpp"
#include "coexlab/runtime/runtime.hpp"
#include "coexlab/rng.hpp"

using namespace coexlab;
using namespace coexlab::rt;

namespace {

// tiny model over width-16 windows: class 0 = quiet level, class 1 = loud
nn::FcnModel tiny_model() {
    Rng rng(1);
    std::vector<data::LabeledChunk> train;
    for (int i = 0; i < 120; ++i) {
        data::LabeledChunk c;
        c.label = i % 2;
        c.values.resize(16);
        const double level = c.label == 0 ? -94.0 : -40.0;
        for (auto& v : c.values) v = level + rng.normal();
        train.push_back(std::move(c));
    }
    std::vector<double> vals;
    for (const auto& c : train) vals.insert(vals.end(), c.values.begin(), c.values.end());
    const auto stats = data::compute_norm_stats(vals);
    for (auto& c : train) {
        data::clip_outliers_inplace(c.values, stats);
        data::normalize_inplace(c.values, stats);
    }
    auto model = nn::FcnModel::make(16, 2, 5);
    model.norm = stats;
    nn::TrainConfig cfg;
    cfg.optimizer = nn::Optimizer::Adam;
    cfg.lr = 1e-3;
    cfg.epochs = 4;
    cfg.batch = 16;
    cfg.seed = 2;
    nn::train(model, train, {}, cfg);
    return model;
}

std::vector<sim::EnergySample> level_stream(double level, std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<sim::EnergySample> out;
    for (std::size_t i = 0; i < n; ++i)
        out.push_back({static_cast<double>(i + 1) / 192.0, level + rng.normal()});
    return out;
}

}  // namespace

TEST_CASE("constant noise-floor stream classifies as the quiet class") {
    const auto model = tiny_model();
    const auto samples = level_stream(-94.0, 200, 3);
    const auto decisions = stream_infer(model, samples, 4);
    REQUIRE(!decisions.empty());
    for (const auto& d : decisions) CHECK(d.ap_count == 0);
}

TEST_CASE("stream decisions equal batch inference over the same windows") {
    const auto model = tiny_model();
    Rng rng(7);
    std::vector<sim::EnergySample> samples;
    for (int i = 0; i < 400; ++i) {
        const double level = i < 200 ? -94.0 : -40.0;
        samples.push_back({static_cast<double>(i + 1) / 192.0, level + rng.normal()});
    }
    for (std::size_t stride : {1ul, 4ul, 16ul}) {
        const auto live = stream_infer(model, samples, stride);
        const auto batch = batch_infer(model, samples, stride);
        REQUIRE(live.size() == batch.size());
        for (std::size_t i = 0; i < live.size(); ++i) {
            REQUIRE(live[i].t == batch[i].t);
            REQUIRE(live[i].ap_count == batch[i].ap_count);
        }
    }
}

TEST_CASE("first decision arrives once the buffer holds a full window") {
    const auto model = tiny_model();  // width 16
    const auto samples = level_stream(-94.0, 64, 9);
    const auto decisions = stream_infer(model, samples, 4);
    REQUIRE(!decisions.empty());
    // 16th sample lands at t = 16/192
    CHECK(decisions[0].t == doctest::Approx(16.0 / 192.0));
    // subsequent decisions every 4 samples
    CHECK(decisions[1].t == doctest::Approx(20.0 / 192.0));
}

TEST_CASE("a width-512 model at 192 Hz decides first at about 2.67 s") {
    // arithmetic only; no trained model needed
    CHECK(512.0 / 192.0 == doctest::Approx(2.6667).epsilon(1e-3));
}

TEST_CASE("debounce: two agreeing decisions flip the state") {
    Debounce db(1);
    CHECK(!db.push(1));
    CHECK(!db.push(2));
    auto s = db.push(2);
    REQUIRE(s.has_value());
    CHECK(*s == 2);
    CHECK(db.state() == 2);
}

TEST_CASE("debounce: alternation never flips") {
    Debounce db(1);
    for (int cls : {2, 1, 2, 1, 2}) CHECK(!db.push(cls).has_value());
    CHECK(db.state() == 1);
}

TEST_CASE("debounce never emits a state absent from its input") {
    Rng rng(11);
    Debounce db(0);
    std::vector<int> inputs;
    for (int i = 0; i < 500; ++i) inputs.push_back(static_cast<int>(rng.next_below(4)));
    for (int cls : inputs) {
        if (auto s = db.push(cls)) {
            CHECK(std::find(inputs.begin(), inputs.end(), *s) != inputs.end());
            CHECK(*s == cls);
        }
    }
}

TEST_CASE("isolated misclassifications are suppressed") {
    Rng rng(13);
    Debounce db(3);
    int flips = 0;
    for (int i = 0; i < 2000; ++i) {
        // 1% isolated noise, never two in a row
        int cls = 3;
        if (rng.next_double() < 0.01) cls = 1;
        if (auto s = db.push(cls)) ++flips;
        if (cls != 3) {
            if (auto s = db.push(3)) ++flips;  // force separation
            ++i;
        }
    }
    CHECK(flips == 0);
}

TEST_CASE("csat duty mapping follows the scale-back policy") {
    CHECK(csat_set_duty(0).duty_cycle == doctest::Approx(0.95));
    CHECK(csat_set_duty(1).duty_cycle == doctest::Approx(0.50));
    CHECK(csat_set_duty(1).period_ms == doctest::Approx(40.0));
    CHECK(csat_set_duty(2).duty_cycle == doctest::Approx(1.0 / 3.0));
    CHECK(csat_set_duty(3).duty_cycle == doctest::Approx(0.25));
    CHECK(csat_set_duty(5).duty_cycle == doctest::Approx(1.0 / 6.0));
    for (int k = 0; k <= 5; ++k) {
        const auto s = csat_set_duty(k);
        CHECK(s.duty_cycle > 0.0);
        CHECK(s.duty_cycle <= 0.95);
    }
    CHECK_THROWS_AS(csat_set_duty(-1), std::invalid_argument);
}

TEST_CASE("measure_delay reports the debounced settle time") {
    std::vector<detect::Decision> d;
    for (int i = 1; i <= 30; ++i) {
        int cls = 1;
        if (i >= 12) cls = 2;  // truth changed at t=10; reads settle at 12
        d.push_back({static_cast<double>(i), cls});
    }
    const std::vector<sim::TruthPoint> truth = {{0.0, 1}, {10.0, 2}};
    const auto delays = measure_delay(d, truth);
    REQUIRE(delays.size() == 1);
    CHECK(delays[0].delay_s == doctest::Approx(3.0));  // two agreeing reads at t=12,13
}

TEST_CASE("measure_delay times out when the change is never seen") {
    std::vector<detect::Decision> d;
    for (int i = 1; i <= 20; ++i) d.push_back({static_cast<double>(i), 1});
    const std::vector<sim::TruthPoint> truth = {{0.0, 1}, {10.0, 2}};
    const auto delays = measure_delay(d, truth);
    REQUIRE(delays.size() == 1);
    CHECK(std::isinf(delays[0].delay_s));
}

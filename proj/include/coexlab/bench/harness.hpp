#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "coexlab/data/chunker.hpp"
#include "coexlab/data/normalize.hpp"
#include "coexlab/detect/detectors.hpp"
#include "coexlab/nn/train.hpp"
#include "coexlab/sim/scenario.hpp"
#include "coexlab/sim/simulate.hpp"

namespace coexlab::bench {

// AP counts a C-class task distinguishes. Tasks up to five classes use the
// nonzero counts {1..C}; the six-class task adds the idle channel.
std::vector<int> suite_classes(int class_count);

sim::ScenarioConfig make_scenario(int ap_count, double distance_feet, sim::Sight sight,
                                  double duty, double period_ms, double duration_s,
                                  std::uint64_t seed);

// One labeled raw trace per truth segment, so chunks never span an AP-count
// change.
std::vector<data::RawTrace> segments_by_truth(const sim::SimTrace& trace,
                                              const std::string& source);

// Chunk -> shuffle -> 50/50 split -> stats on the train half -> clip and
// normalize both halves with those stats.
struct PreparedDataset {
    std::vector<data::LabeledChunk> train, test;
    data::NormStats stats;
};
PreparedDataset prepare_dataset(const std::vector<data::RawTrace>& traces, std::size_t width,
                                std::uint64_t seed);

struct SuiteParams {
    double distance_feet = 6.0;
    sim::Sight sight = sim::Sight::Nlos;
    double duty_cycle = 0.5;
    double period_ms = 40.0;
    double duration_s = 48.0;
    std::size_t chunk_width = 512;
    std::size_t ml_seed_count = 4;    // seeds pooled into the ML chunk split
    std::size_t calib_seed_count = 4; // threshold calibration traces
    std::size_t eval_seed_count = 10; // ED/AC/HD evaluation traces
    std::size_t max_chunks_per_class = 0;  // 0 = keep all
    std::uint64_t seed_base = 1;
    nn::TrainConfig train;
};

struct SuiteArtifacts {
    int class_count = 0;
    std::vector<int> classes;  // physical AP counts
    int label_base = 0;        // chunk label = count - label_base
    nn::FcnModel model;
    nn::TrainHistory history;
    std::vector<data::LabeledChunk> train_chunks, test_chunks;
    detect::EdThresholds ed;
    detect::AcConfig ac;
    double ml_accuracy = 0.0;
    double ed_accuracy = 0.0;  // mean over eval seeds, truth classes >= 1
    double ac_accuracy = 0.0;
    double hd_accuracy = 0.0;
    std::vector<double> ed_seed_accuracy, ac_seed_accuracy, hd_seed_accuracy;
};

// Full pipeline for one class-count: simulate, build the chunk dataset,
// train the FCN, calibrate and evaluate the three detectors.
SuiteArtifacts run_suite(const SuiteParams& p, int class_count);

struct DelayOutcome {
    double hd_mean_s = 0.0;
    double ed_mean_s = 0.0;
    double ac_mean_s = 0.0;
    double ml_mean_s = 0.0;
};

// Arrival suite: four APs running, a fifth joins mid-trace; measures the
// debounced adaptation delay of each detector.
DelayOutcome run_delay_suite(const SuiteParams& p, const SuiteArtifacts& six_class,
                             std::size_t seed_count, std::size_t ml_stride);

// Named placements (cases A..N): distances in feet of the active APs.
struct NamedCase {
    char name;
    std::vector<double> distances_feet;
};
const std::vector<NamedCase>& named_cases();
sim::ScenarioConfig scenario_for_case(char name, sim::Sight sight, double duty, double period_ms,
                                      double duration_s, std::uint64_t seed);

}  // namespace coexlab::bench

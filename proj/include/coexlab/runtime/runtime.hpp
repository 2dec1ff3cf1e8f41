#pragma once

#include <deque>
#include <optional>
#include <vector>

#include "coexlab/detect/detectors.hpp"
#include "coexlab/nn/model.hpp"
#include "coexlab/sim/trace.hpp"

namespace coexlab::rt {

// Sliding-window classifier over a raw dBm sample stream. Fills a
// width-sized buffer, then classifies every `stride` samples; each incoming
// window is clipped and normalized with the model's training stats.
class StreamInference {
public:
    StreamInference(const nn::FcnModel& model, std::size_t stride);

    // Returns a decision whenever the window is complete, stamped with the
    // timestamp of the newest sample.
    std::optional<detect::Decision> push(double t, double dbm);

    void reset();

private:
    const nn::FcnModel& model_;
    std::size_t stride_;
    std::deque<double> buffer_;
    std::size_t since_last_ = 0;
    bool primed_ = false;
};

// Convenience wrapper: run the stream over a recorded energy trace.
std::vector<detect::Decision> stream_infer(const nn::FcnModel& model,
                                           const std::vector<sim::EnergySample>& samples,
                                           std::size_t stride);

// Batch counterpart used to cross-check the stream path: classifies the
// windows ending at the same positions.
std::vector<detect::Decision> batch_infer(const nn::FcnModel& model,
                                          const std::vector<sim::EnergySample>& samples,
                                          std::size_t stride);

// State changes only after two consecutive equal classifications that
// differ from the current state.
class Debounce {
public:
    explicit Debounce(int initial_state = 0) : state_(initial_state) {}

    // Returns the new state when a change fires.
    std::optional<int> push(int cls);

    int state() const { return state_; }

private:
    int state_;
    int pending_ = -1;
    int pending_count_ = 0;
};

std::vector<detect::Decision> debounce_stream(const std::vector<detect::Decision>& classes,
                                              int initial_state);

struct DutyCycleState {
    int ap_count = 0;
    double duty_cycle = 0.95;
    double period_ms = 20.0;
};

// CSAT scale-back: 0 APs run at the 95% cap, one AP at 50%, N >= 2 APs at
// the 1/(N+1) fair share.
DutyCycleState csat_set_duty(int ap_count);

struct DelayResult {
    double change_time_s = 0.0;
    double delay_s = 0.0;  // +inf when the detector never settled on the new truth
};

// Time from each truth change to the debounced state reaching the new
// truth.
std::vector<DelayResult> measure_delay(const std::vector<detect::Decision>& decisions,
                                       const std::vector<sim::TruthPoint>& truth);

double mean_delay(const std::vector<DelayResult>& delays);

}  // namespace coexlab::rt

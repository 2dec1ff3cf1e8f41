#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "coexlab/sim/trace.hpp"

namespace coexlab::detect {

struct Decision {
    double t = 0.0;
    int ap_count = 0;
};

// ---- header decoding -------------------------------------------------

struct HdConfig {
    double time_slot_s = 0.512;
    int beacon_threshold = 4;
    // The slower, higher-confidence variant uses 1.024 s / 9 beacons.
};

// Counts beacons per unique BSSID over each elapsed time slot; an AP is
// active iff its count reaches the threshold. Emits one decision per slot,
// including empty ones (ap_count 0).
std::vector<Decision> hd_detect(const std::vector<sim::BeaconEvent>& beacons, double duration_s,
                                const HdConfig& cfg);

// ---- energy detection ------------------------------------------------

// alphas[j] is the boundary between classes j and j+1 (alpha_1..alpha_C-1
// ascending, implicit alpha_C = +inf): avg below alphas[0] reads as 0 APs.
struct EdThresholds {
    std::vector<double> alphas;
    bool warning = false;  // calibration found classes poorly separable
};

// Averages dBm over tumbling windows; windows without samples emit nothing.
// Interval boundaries are half-open: class i covers [alpha_i, alpha_i+1).
std::vector<Decision> ed_detect(const std::vector<sim::EnergySample>& energy,
                                const EdThresholds& th, double window_s = 1.0);

// ---- auto-correlation ------------------------------------------------

// ratios[i] is the calibrated upper band edge of class i (R_1..R_C-1 in
// ascending order; the top class is unbounded). A window classifies to the
// smallest class whose band contains Signal/T.
struct AcConfig {
    double th_rho = 0.25;
    std::vector<double> ratios;
    bool warning = false;
};

std::vector<Decision> ac_detect(const std::vector<sim::AcSample>& ac_values, const AcConfig& cfg,
                                double window_s = 1.0);

// ---- calibration -----------------------------------------------------

struct LabeledTrace {
    const sim::SimTrace* trace;
    int label;
};

// Per adjacent class pair, sweeps a boundary grid fitted on even-index
// traces and scored on the odd-index holdout, maximizing balanced
// detection; ties resolve to the plateau midpoint. Deterministic given
// input order. Non-separable pairs fall back to the midpoint of the class
// means and set the warning flag.
EdThresholds calibrate_ed_thresholds(const std::vector<LabeledTrace>& traces,
                                     double window_s = 1.0, double grid_db = 0.1);

AcConfig calibrate_ac_ratios(const std::vector<LabeledTrace>& traces, double window_s = 1.0,
                             double grid = 0.005, double th_rho = 0.25);

// Window statistics the two calibrations sweep over; exposed for tests.
std::vector<double> ed_window_averages(const std::vector<sim::EnergySample>& energy,
                                       double window_s = 1.0);
std::vector<double> ac_window_ratios(const std::vector<sim::AcSample>& ac_values, double th_rho,
                                     double window_s = 1.0);

// ---- scoring ----------------------------------------------------------

struct DetectorReport {
    // Counters in the sense of the scale-back algorithms: detect[i] counts
    // windows with truth i classified i, falsealarm[i] counts windows with
    // truth i classified otherwise.
    std::vector<std::uint64_t> detect;
    std::vector<std::uint64_t> falsealarm;
    std::uint64_t total = 0;
    std::uint64_t correct = 0;
    double accuracy = 0.0;  // correct / total over all scored decisions
    double p_d = 0.0;       // mean per-class detection rate, truth classes >= 1
    double p_fa = 0.0;      // mean per-class rate of deciding i when truth != i
    double mean_detection_delay_s = 0.0;  // +inf when a change never gets detected
    std::size_t change_points_scored = 0;
};

// Scores decisions against the truth step function; detection delay is the
// time from each truth change to the first pair of consecutive decisions
// agreeing with the new truth. Empty decision streams are an error.
DetectorReport score_detector(const std::vector<Decision>& decisions,
                              const std::vector<sim::TruthPoint>& truth);

void write_report(const DetectorReport& report, const std::string& path);
std::string format_report(const DetectorReport& report);

void write_decisions_csv(const std::vector<Decision>& decisions, const std::string& path);

}  // namespace coexlab::detect

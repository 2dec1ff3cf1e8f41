#pragma once

#include <cstdint>

#include "coexlab/rng.hpp"

namespace coexlab::sim {

// 5 GHz OFDM MAC constants. The standard leaves these to the PHY profile;
// values here are the 802.11a/n/ac numbers.
struct DcfParams {
    double slot_s = 9e-6;
    double difs_s = 34e-6;
    double sifs_s = 16e-6;
    int cw_min = 16;    // W0
    int max_stage = 6;  // m
    double beacon_interval_s = 0.1024;
};

// Uniform draw over {0, ..., 2^stage * w0 - 1}. Stage outside [0, max_stage]
// is an invalid-stage error.
std::uint64_t draw_backoff(int stage, int w0, Rng& rng, int max_stage = 6);

struct DcfStationState {
    int bssid = 0;
    int stage = 0;                 // backoff stage i in [0, m]
    std::uint64_t counter = 0;     // remaining backoff slots, < 2^i * W0
    bool extra_retry_used = false; // the single permitted retry at stage m
    bool beacon_pending = false;
    double next_beacon_due = 0.0;
    double rx_power_dbm = 0.0;     // received power at the LTE-U BS
    bool active = false;
};

}  // namespace coexlab::sim

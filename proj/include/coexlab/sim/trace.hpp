#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace coexlab::sim {

struct EnergySample {
    double t = 0.0;
    double dbm = 0.0;
};

struct AcSample {
    double t = 0.0;
    double rho = 0.0;
};

struct BeaconEvent {
    double t = 0.0;
    int bssid = 0;
};

struct TruthPoint {
    double t = 0.0;
    int ap_count = 0;
};

struct SimStats {
    std::uint64_t wifi_tx = 0;          // successful data frames
    std::uint64_t wifi_collisions = 0;  // collision events
    double lteu_on_airtime_s = 0.0;
};

// Everything the LTE-U BS observes during its OFF periods, plus ground
// truth. Immutable after simulate_scenario returns.
struct SimTrace {
    std::vector<EnergySample> energy;
    std::vector<AcSample> ac;
    std::vector<BeaconEvent> beacons;
    std::vector<TruthPoint> truth;  // step function; first point at t = 0
    SimStats stats;

    int truth_at(double t) const;
};

// CSV export/import: energy as "t_s,dbm" plus sidecar files for AC values,
// beacons, truth and stats next to it.
void write_trace(const SimTrace& trace, const std::string& dir);
SimTrace read_trace(const std::string& dir);

std::vector<double> energy_values(const SimTrace& trace);

}  // namespace coexlab::sim

#include <map>
#include <stdexcept>

#include "coexlab/detect/detectors.hpp"

namespace coexlab::detect {

std::vector<Decision> hd_detect(const std::vector<sim::BeaconEvent>& beacons, double duration_s,
                                const HdConfig& cfg) {
    std::vector<Decision> out;
    if (cfg.time_slot_s <= 0.0) throw std::invalid_argument("hd_detect: nonpositive slot");
    std::map<int, int> per_bssid;
    std::size_t i = 0;
    for (double slot_end = cfg.time_slot_s; slot_end <= duration_s + 1e-12;
         slot_end += cfg.time_slot_s) {
        while (i < beacons.size() && beacons[i].t < slot_end) {
            ++per_bssid[beacons[i].bssid];
            ++i;
        }
        int aps = 0;
        for (const auto& [bssid, count] : per_bssid)
            if (count >= cfg.beacon_threshold) ++aps;
        out.push_back({slot_end, aps});
        per_bssid.clear();
    }
    return out;
}

}  // namespace coexlab::detect

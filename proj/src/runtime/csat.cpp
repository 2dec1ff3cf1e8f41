#include <limits>
#include <stdexcept>

#include "coexlab/runtime/runtime.hpp"

namespace coexlab::rt {

DutyCycleState csat_set_duty(int ap_count) {
    if (ap_count < 0) throw std::invalid_argument("csat_set_duty: negative AP count");
    DutyCycleState s;
    s.ap_count = ap_count;
    if (ap_count == 0) {
        s.duty_cycle = 0.95;
        s.period_ms = 20.0;  // keeps the 1 ms minimum OFF duration
    } else if (ap_count == 1) {
        s.duty_cycle = 0.50;
        s.period_ms = 40.0;  // 20 ms ON, 20 ms OFF
    } else {
        s.duty_cycle = 1.0 / static_cast<double>(ap_count + 1);
        s.period_ms = 40.0;
    }
    return s;
}

std::vector<DelayResult> measure_delay(const std::vector<detect::Decision>& decisions,
                                       const std::vector<sim::TruthPoint>& truth) {
    std::vector<DelayResult> out;
    if (truth.size() < 2) return out;
    for (std::size_t c = 1; c < truth.size(); ++c) {
        const double t_c = truth[c].t;
        const int want = truth[c].ap_count;
        const double t_end =
            c + 1 < truth.size() ? truth[c + 1].t : std::numeric_limits<double>::infinity();
        Debounce db(truth[c - 1].ap_count);
        DelayResult r;
        r.change_time_s = t_c;
        r.delay_s = std::numeric_limits<double>::infinity();
        for (const auto& d : decisions) {
            if (d.t < t_c) continue;
            if (d.t >= t_end) break;
            if (auto s = db.push(d.ap_count); s && *s == want) {
                r.delay_s = d.t - t_c;
                break;
            }
        }
        out.push_back(r);
    }
    return out;
}

double mean_delay(const std::vector<DelayResult>& delays) {
    if (delays.empty()) return 0.0;
    double s = 0.0;
    for (const auto& d : delays) s += d.delay_s;
    return s / static_cast<double>(delays.size());
}

}  // namespace coexlab::rt

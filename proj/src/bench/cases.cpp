#include <stdexcept>

#include "coexlab/bench/harness.hpp"

namespace coexlab::bench {

const std::vector<NamedCase>& named_cases() {
    static const std::vector<NamedCase> cases = {
        {'A', {6.0}},
        {'B', {10.0}},
        {'C', {15.0}},
        {'D', {6.0, 6.0}},
        {'E', {6.0, 15.0}},
        {'F', {10.0, 15.0}},
        {'G', {6.0, 6.0, 15.0}},
        {'H', {6.0, 10.0, 15.0}},
        {'I', {6.0, 6.0, 10.0, 15.0}},
        {'J', {6.0, 10.0, 10.0, 15.0}},
        {'K', {6.0, 6.0, 10.0, 10.0, 15.0}},
        {'L', {6.0, 10.0, 10.0, 10.0, 15.0}},
        {'M', {6.0, 10.0, 15.0, 15.0, 15.0}},
        {'N', {6.0, 6.0, 10.0, 15.0, 15.0}},
    };
    return cases;
}

sim::ScenarioConfig scenario_for_case(char name, sim::Sight sight, double duty, double period_ms,
                                      double duration_s, std::uint64_t seed) {
    for (const auto& c : named_cases()) {
        if (c.name != name) continue;
        sim::ScenarioConfig cfg;
        for (double d : c.distances_feet) cfg.ap_list.push_back({d, sight});
        cfg.lteu.duty_cycle = duty;
        cfg.lteu.period_ms = period_ms;
        cfg.duration_s = duration_s;
        cfg.seed = seed;
        cfg.validate();
        return cfg;
    }
    throw std::invalid_argument(std::string("unknown case '") + name + "'");
}

}  // namespace coexlab::bench

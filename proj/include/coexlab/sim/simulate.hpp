#pragma once

#include "coexlab/sim/scenario.hpp"
#include "coexlab/sim/trace.hpp"

namespace coexlab::sim {

// Event-driven DCF contention among the active APs, gated by the LTE-U
// ON/OFF schedule; emits energy samples, AC values and beacon events during
// OFF periods. Deterministic given the scenario seed.
SimTrace simulate_scenario(const ScenarioConfig& cfg);

}  // namespace coexlab::sim

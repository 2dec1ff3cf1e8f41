#pragma once

#include <span>

#include "coexlab/rng.hpp"
#include "coexlab/sim/scenario.hpp"

namespace coexlab::sim {

double dbm_to_mw(double dbm);
double mw_to_dbm(double mw);

inline constexpr double kMetersPerFoot = 0.3048;

// Log-distance loss with an NLOS wall penalty and a shadowing draw.
// Nonpositive distance is a domain error.
double path_loss_db(double distance_feet, Sight sight, const PathLossParams& params, Rng& rng);

// Energy of one measurement window: noise floor plus the airtime-weighted
// power-domain sum of the concurrent received signals. An empty power list
// with busy_fraction > 0 violates the contract.
double sample_energy(double busy_fraction, std::span<const double> received_powers_dbm,
                     double noise_floor_dbm);

}  // namespace coexlab::sim

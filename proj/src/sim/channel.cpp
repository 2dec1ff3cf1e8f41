#include "coexlab/sim/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace coexlab::sim {

double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }

double mw_to_dbm(double mw) { return 10.0 * std::log10(mw); }

double path_loss_db(double distance_feet, Sight sight, const PathLossParams& params, Rng& rng) {
    if (!(distance_feet > 0.0)) throw std::domain_error("path_loss_db: nonpositive distance");
    const double d_m = distance_feet * kMetersPerFoot;
    const double exponent =
        sight == Sight::Los ? params.exponent_los : params.exponent_nlos;
    double loss = params.ref_loss_db + 10.0 * exponent * std::log10(d_m);
    if (sight == Sight::Nlos) loss += params.wall_penalty_db;
    if (params.shadow_sigma_db > 0.0) loss += rng.normal(0.0, params.shadow_sigma_db);
    return loss;
}

double sample_energy(double busy_fraction, std::span<const double> received_powers_dbm,
                     double noise_floor_dbm) {
    if (!(busy_fraction >= 0.0 && busy_fraction <= 1.0))
        throw std::domain_error("sample_energy: busy_fraction outside [0,1]");
    if (busy_fraction == 0.0) return noise_floor_dbm;
    if (received_powers_dbm.empty())
        throw std::logic_error("sample_energy: busy window without any signal");
    double sum_mw = 0.0;
    for (double p : received_powers_dbm) sum_mw += dbm_to_mw(p);
    return mw_to_dbm(dbm_to_mw(noise_floor_dbm) + busy_fraction * sum_mw);
}

}  // namespace coexlab::sim

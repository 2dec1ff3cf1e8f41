#include <stdexcept>

#include "coexlab/detect/detectors.hpp"

namespace coexlab::detect {
namespace {

// Smallest class whose band contains the ratio; bands are (R_i-1, R_i]
// with the top class open-ended.
int classify_ratio(double ratio, const std::vector<double>& ratios) {
    for (std::size_t i = 0; i < ratios.size(); ++i)
        if (ratio <= ratios[i]) return static_cast<int>(i);
    return static_cast<int>(ratios.size());
}

}  // namespace

std::vector<double> ac_window_ratios(const std::vector<sim::AcSample>& ac_values, double th_rho,
                                     double window_s) {
    std::vector<double> out;
    double window_end = window_s;
    std::size_t signal = 0, total = 0;
    std::size_t i = 0;
    while (i < ac_values.size()) {
        if (ac_values[i].t < window_end) {
            if (ac_values[i].rho >= th_rho) ++signal;
            ++total;
            ++i;
            continue;
        }
        if (total > 0)
            out.push_back(static_cast<double>(signal) / static_cast<double>(total));
        signal = 0;
        total = 0;
        window_end += window_s;
    }
    if (total > 0) out.push_back(static_cast<double>(signal) / static_cast<double>(total));
    return out;
}

std::vector<Decision> ac_detect(const std::vector<sim::AcSample>& ac_values, const AcConfig& cfg,
                                double window_s) {
    if (!(cfg.th_rho > 0.0 && cfg.th_rho < 1.0))
        throw std::invalid_argument("ac_detect: th_rho outside (0,1)");
    for (std::size_t j = 1; j < cfg.ratios.size(); ++j)
        if (cfg.ratios[j] < cfg.ratios[j - 1])
            throw std::invalid_argument("ac_detect: ratios not nondecreasing");
    std::vector<Decision> out;
    double window_end = window_s;
    std::size_t signal = 0, total = 0;
    std::size_t i = 0;
    while (i < ac_values.size()) {
        if (ac_values[i].t < window_end) {
            if (ac_values[i].rho >= cfg.th_rho) ++signal;
            ++total;
            ++i;
            continue;
        }
        if (total > 0) {
            const double ratio = static_cast<double>(signal) / static_cast<double>(total);
            out.push_back({window_end, classify_ratio(ratio, cfg.ratios)});
        }
        signal = 0;
        total = 0;
        window_end += window_s;
    }
    if (total > 0) {
        const double ratio = static_cast<double>(signal) / static_cast<double>(total);
        out.push_back({window_end, classify_ratio(ratio, cfg.ratios)});
    }
    return out;
}

}  // namespace coexlab::detect

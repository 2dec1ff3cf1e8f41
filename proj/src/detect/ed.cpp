#include <cmath>
#include <stdexcept>

#include "coexlab/detect/detectors.hpp"

namespace coexlab::detect {
namespace {

int classify_by_boundaries(double value, const std::vector<double>& ascending) {
    int cls = 0;
    for (double b : ascending) {
        if (value >= b)
            ++cls;
        else
            break;
    }
    return cls;
}

}  // namespace

std::vector<double> ed_window_averages(const std::vector<sim::EnergySample>& energy,
                                       double window_s) {
    std::vector<double> out;
    double window_end = window_s;
    double sum = 0.0;
    std::size_t count = 0;
    std::size_t i = 0;
    while (i < energy.size()) {
        if (energy[i].t < window_end) {
            sum += energy[i].dbm;
            ++count;
            ++i;
            continue;
        }
        if (count > 0) out.push_back(sum / static_cast<double>(count));
        sum = 0.0;
        count = 0;
        window_end += window_s;
    }
    if (count > 0) out.push_back(sum / static_cast<double>(count));
    return out;
}

std::vector<Decision> ed_detect(const std::vector<sim::EnergySample>& energy,
                                const EdThresholds& th, double window_s) {
    for (std::size_t j = 1; j < th.alphas.size(); ++j)
        if (!(th.alphas[j - 1] < th.alphas[j]))
            throw std::invalid_argument("ed_detect: thresholds not ascending");
    std::vector<Decision> out;
    double window_end = window_s;
    double sum = 0.0;
    std::size_t count = 0;
    std::size_t i = 0;
    while (i < energy.size()) {
        if (energy[i].t < window_end) {
            sum += energy[i].dbm;
            ++count;
            ++i;
            continue;
        }
        if (count > 0)  // a window with no samples emits nothing
            out.push_back({window_end, classify_by_boundaries(sum / count, th.alphas)});
        sum = 0.0;
        count = 0;
        window_end += window_s;
    }
    if (count > 0) out.push_back({window_end, classify_by_boundaries(sum / count, th.alphas)});
    return out;
}

}  // namespace coexlab::detect

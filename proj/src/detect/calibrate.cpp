#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "coexlab/detect/detectors.hpp"

namespace coexlab::detect {
namespace {

struct ClassWindows {
    std::vector<double> fit, holdout;
};

double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

// Boundary between one adjacent class pair: grid sweep fitted on the fit
// halves, scored by balanced detection on the holdout halves, plateau ties
// resolved to their midpoint.
double sweep_boundary(const ClassWindows& lo_cls, const ClassWindows& hi_cls, double step,
                      bool& warn) {
    if (lo_cls.fit.empty() || hi_cls.fit.empty())
        throw std::invalid_argument("calibration: class without calibration windows");
    const double mean_lo = mean_of(lo_cls.fit);
    const double mean_hi = mean_of(hi_cls.fit);
    if (!(mean_lo < mean_hi)) {
        warn = true;
        return 0.5 * (mean_lo + mean_hi);
    }
    double lo = *std::min_element(lo_cls.fit.begin(), lo_cls.fit.end());
    double hi = *std::max_element(hi_cls.fit.begin(), hi_cls.fit.end());
    for (double v : hi_cls.fit) lo = std::min(lo, v);
    for (double v : lo_cls.fit) hi = std::max(hi, v);
    if (hi - lo < step) {
        warn = true;
        return 0.5 * (mean_lo + mean_hi);
    }

    const auto& hold_lo = lo_cls.holdout.empty() ? lo_cls.fit : lo_cls.holdout;
    const auto& hold_hi = hi_cls.holdout.empty() ? hi_cls.fit : hi_cls.holdout;
    auto score = [&](double c) {
        std::size_t a = 0, b = 0;
        for (double v : hold_lo)
            if (v < c) ++a;
        for (double v : hold_hi)
            if (v >= c) ++b;
        return 0.5 * (static_cast<double>(a) / static_cast<double>(hold_lo.size()) +
                      static_cast<double>(b) / static_cast<double>(hold_hi.size()));
    };

    double best = -1.0, first_best = lo, last_best = lo;
    const auto steps = static_cast<std::size_t>(std::ceil((hi - lo) / step));
    for (std::size_t k = 0; k <= steps; ++k) {
        const double c = lo + static_cast<double>(k) * step;
        const double s = score(c);
        if (s > best + 1e-12) {
            best = s;
            first_best = last_best = c;
        } else if (s > best - 1e-12) {
            last_best = c;
        }
    }
    if (best < 0.55) warn = true;
    return 0.5 * (first_best + last_best);
}

// Splits each class's traces into even-index (fit) and odd-index (holdout)
// halves, in input order.
template <typename Stat>
std::map<int, ClassWindows> collect_windows(const std::vector<LabeledTrace>& traces,
                                            double window_s, Stat&& stat) {
    std::map<int, ClassWindows> per_class;
    std::map<int, std::size_t> seen;
    for (const auto& lt : traces) {
        if (!lt.trace) throw std::invalid_argument("calibration: null trace");
        const auto vals = stat(*lt.trace, window_s);
        auto& cw = per_class[lt.label];
        auto& n = seen[lt.label];
        auto& dst = (n % 2 == 0) ? cw.fit : cw.holdout;
        dst.insert(dst.end(), vals.begin(), vals.end());
        ++n;
    }
    if (per_class.size() < 2)
        throw std::invalid_argument("calibration: need at least 2 distinct classes");
    int prev = per_class.begin()->first;
    for (auto it = std::next(per_class.begin()); it != per_class.end(); ++it) {
        if (it->first != prev + 1)
            throw std::invalid_argument("calibration: class labels must be contiguous");
        prev = it->first;
    }
    return per_class;
}

}  // namespace

EdThresholds calibrate_ed_thresholds(const std::vector<LabeledTrace>& traces, double window_s,
                                     double grid_db) {
    auto per_class = collect_windows(traces, window_s, [](const sim::SimTrace& t, double w) {
        return ed_window_averages(t.energy, w);
    });
    EdThresholds th;
    const int first_label = per_class.begin()->first;
    // Guard boundaries for absent low classes: idle-band readings must
    // still map below the first calibrated class.
    if (first_label > 0) {
        const auto& first = per_class.begin()->second;
        const double fit_min = *std::min_element(first.fit.begin(), first.fit.end());
        for (int j = 0; j < first_label; ++j)
            th.alphas.push_back(fit_min - static_cast<double>(first_label - j));
    }
    for (auto it = per_class.begin(); std::next(it) != per_class.end(); ++it)
        th.alphas.push_back(
            sweep_boundary(it->second, std::next(it)->second, grid_db, th.warning));
    for (std::size_t j = 1; j < th.alphas.size(); ++j)
        if (th.alphas[j] <= th.alphas[j - 1]) {
            th.alphas[j] = th.alphas[j - 1] + grid_db;
            th.warning = true;
        }
    return th;
}

AcConfig calibrate_ac_ratios(const std::vector<LabeledTrace>& traces, double window_s,
                             double grid, double th_rho) {
    auto per_class = collect_windows(traces, window_s, [&](const sim::SimTrace& t, double w) {
        return ac_window_ratios(t.ac, th_rho, w);
    });
    AcConfig cfg;
    cfg.th_rho = th_rho;
    const int first_label = per_class.begin()->first;
    if (first_label > 0) {
        const auto& first = per_class.begin()->second;
        const double fit_min = *std::min_element(first.fit.begin(), first.fit.end());
        for (int j = 0; j < first_label; ++j)
            cfg.ratios.push_back(std::max(0.0, fit_min * static_cast<double>(j + 1) /
                                                   static_cast<double>(first_label + 1)));
    }
    for (auto it = per_class.begin(); std::next(it) != per_class.end(); ++it)
        cfg.ratios.push_back(
            sweep_boundary(it->second, std::next(it)->second, grid, cfg.warning));
    for (std::size_t j = 1; j < cfg.ratios.size(); ++j)
        if (cfg.ratios[j] < cfg.ratios[j - 1]) {
            cfg.ratios[j] = cfg.ratios[j - 1];
            cfg.warning = true;
        }
    for (double& r : cfg.ratios) r = std::clamp(r, 0.0, 1.0);
    return cfg;
}

}  // namespace coexlab::detect

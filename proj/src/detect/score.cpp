#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "coexlab/detect/detectors.hpp"

namespace coexlab::detect {
namespace {

int truth_lookup(const std::vector<sim::TruthPoint>& truth, double t) {
    int count = 0;
    for (const auto& p : truth) {
        if (p.t > t) break;
        count = p.ap_count;
    }
    return count;
}

}  // namespace

DetectorReport score_detector(const std::vector<Decision>& decisions,
                              const std::vector<sim::TruthPoint>& truth) {
    if (decisions.empty())
        throw std::invalid_argument("score_detector: empty decision stream has no report");
    if (truth.empty()) throw std::invalid_argument("score_detector: empty truth");

    int max_class = 0;
    for (const auto& p : truth) max_class = std::max(max_class, p.ap_count);
    for (const auto& d : decisions) max_class = std::max(max_class, d.ap_count);

    DetectorReport r;
    r.detect.assign(static_cast<std::size_t>(max_class) + 1, 0);
    r.falsealarm.assign(static_cast<std::size_t>(max_class) + 1, 0);
    std::vector<std::uint64_t> truth_windows(static_cast<std::size_t>(max_class) + 1, 0);
    std::vector<std::uint64_t> decided_when_other(static_cast<std::size_t>(max_class) + 1, 0);

    for (const auto& d : decisions) {
        const int want = truth_lookup(truth, d.t);
        ++truth_windows[static_cast<std::size_t>(want)];
        ++r.total;
        if (d.ap_count == want) {
            ++r.correct;
            ++r.detect[static_cast<std::size_t>(want)];
        } else {
            ++r.falsealarm[static_cast<std::size_t>(want)];
            ++decided_when_other[static_cast<std::size_t>(d.ap_count)];
        }
    }
    r.accuracy = static_cast<double>(r.correct) / static_cast<double>(r.total);

    double pd_sum = 0.0;
    std::size_t pd_classes = 0;
    for (std::size_t c = 1; c < truth_windows.size(); ++c) {
        if (truth_windows[c] == 0) continue;
        pd_sum += static_cast<double>(r.detect[c]) / static_cast<double>(truth_windows[c]);
        ++pd_classes;
    }
    r.p_d = pd_classes > 0 ? pd_sum / static_cast<double>(pd_classes) : r.accuracy;

    double pfa_sum = 0.0;
    std::size_t pfa_classes = 0;
    for (std::size_t c = 0; c < truth_windows.size(); ++c) {
        const std::uint64_t others = r.total - truth_windows[c];
        if (others == 0) continue;
        pfa_sum += static_cast<double>(decided_when_other[c]) / static_cast<double>(others);
        ++pfa_classes;
    }
    r.p_fa = pfa_classes > 0 ? pfa_sum / static_cast<double>(pfa_classes) : 0.0;

    // Detection delay per truth change: first pair of consecutive decisions
    // matching the new truth.
    double delay_sum = 0.0;
    std::size_t delays = 0;
    for (std::size_t c = 1; c < truth.size(); ++c) {
        const double t_c = truth[c].t;
        const int want = truth[c].ap_count;
        const double t_end =
            c + 1 < truth.size() ? truth[c + 1].t : std::numeric_limits<double>::infinity();
        double found = std::numeric_limits<double>::infinity();
        int run = 0;
        for (const auto& d : decisions) {
            if (d.t < t_c) continue;
            if (d.t >= t_end) break;
            run = d.ap_count == want ? run + 1 : 0;
            if (run >= 2) {
                found = d.t - t_c;
                break;
            }
        }
        delay_sum += found;
        ++delays;
    }
    r.change_points_scored = delays;
    r.mean_detection_delay_s = delays > 0 ? delay_sum / static_cast<double>(delays) : 0.0;
    return r;
}

std::string format_report(const DetectorReport& r) {
    std::ostringstream out;
    out << "total = " << r.total << "\n";
    out << "correct = " << r.correct << "\n";
    out << "accuracy = " << r.accuracy << "\n";
    out << "p_d = " << r.p_d << "\n";
    out << "p_fa = " << r.p_fa << "\n";
    for (std::size_t c = 0; c < r.detect.size(); ++c)
        out << "detect_" << c << " = " << r.detect[c] << "\n";
    for (std::size_t c = 0; c < r.falsealarm.size(); ++c)
        out << "falsealarm_" << c << " = " << r.falsealarm[c] << "\n";
    if (r.change_points_scored > 0)
        out << "mean_detection_delay_s = " << r.mean_detection_delay_s << "\n";
    return out.str();
}

void write_report(const DetectorReport& report, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << format_report(report);
    if (!out) throw std::runtime_error("write failed: " + path);
}

void write_decisions_csv(const std::vector<Decision>& decisions, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << "t_s,ap_count\n";
    char buf[32];
    for (const auto& d : decisions) {
        const auto res = std::to_chars(buf, buf + sizeof(buf), d.t);
        out.write(buf, res.ptr - buf);
        out << ',' << d.ap_count << '\n';
    }
}

}  // namespace coexlab::detect

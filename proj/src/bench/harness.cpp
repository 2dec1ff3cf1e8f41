#include <algorithm>
#include <limits>
#include <map>
#include <stdexcept>

#include "coexlab/bench/harness.hpp"
#include "coexlab/rng.hpp"
#include "coexlab/runtime/runtime.hpp"

namespace coexlab::bench {
namespace {

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t suite, std::uint64_t role,
                          std::uint64_t cls, std::uint64_t idx) {
    Rng r = Rng(base).fork(suite).fork(role).fork(cls).fork(idx);
    return r.next_u64();
}

}  // namespace

std::vector<int> suite_classes(int class_count) {
    if (class_count < 2 || class_count > 6)
        throw std::invalid_argument("suite_classes: class count outside [2,6]");
    std::vector<int> out;
    if (class_count == 6) {
        for (int k = 0; k <= 5; ++k) out.push_back(k);
    } else {
        for (int k = 1; k <= class_count; ++k) out.push_back(k);
    }
    return out;
}

sim::ScenarioConfig make_scenario(int ap_count, double distance_feet, sim::Sight sight,
                                  double duty, double period_ms, double duration_s,
                                  std::uint64_t seed) {
    sim::ScenarioConfig cfg;
    for (int i = 0; i < ap_count; ++i) cfg.ap_list.push_back({distance_feet, sight});
    cfg.lteu.duty_cycle = duty;
    cfg.lteu.period_ms = period_ms;
    cfg.duration_s = duration_s;
    cfg.seed = seed;
    cfg.validate();
    return cfg;
}

std::vector<data::RawTrace> segments_by_truth(const sim::SimTrace& trace,
                                              const std::string& source) {
    std::vector<data::RawTrace> out;
    std::size_t i = 0;
    for (std::size_t seg = 0; seg < trace.truth.size(); ++seg) {
        const double seg_end = seg + 1 < trace.truth.size()
                                   ? trace.truth[seg + 1].t
                                   : std::numeric_limits<double>::infinity();
        data::RawTrace raw;
        raw.label = trace.truth[seg].ap_count;
        raw.source = source + "#" + std::to_string(seg);
        while (i < trace.energy.size() && trace.energy[i].t < seg_end) {
            raw.values.push_back(trace.energy[i].dbm);
            ++i;
        }
        if (!raw.values.empty()) out.push_back(std::move(raw));
    }
    return out;
}

PreparedDataset prepare_dataset(const std::vector<data::RawTrace>& traces, std::size_t width,
                                std::uint64_t seed) {
    std::vector<data::LabeledChunk> chunks;
    for (const auto& t : traces) {
        auto c = data::chunk_trace(t, width);
        chunks.insert(chunks.end(), std::make_move_iterator(c.begin()),
                      std::make_move_iterator(c.end()));
    }
    if (chunks.size() < 2) throw std::runtime_error("prepare_dataset: not enough chunks");
    auto [train, test] = data::split_shuffle(std::move(chunks), seed);

    std::vector<double> train_values;
    for (const auto& c : train)
        train_values.insert(train_values.end(), c.values.begin(), c.values.end());
    PreparedDataset ds;
    ds.stats = data::compute_norm_stats(train_values);
    for (auto* half : {&train, &test})
        for (auto& c : *half) {
            data::clip_outliers_inplace(c.values, ds.stats);
            data::normalize_inplace(c.values, ds.stats);
        }
    ds.train = std::move(train);
    ds.test = std::move(test);
    return ds;
}

namespace {

void cap_per_class(std::vector<data::LabeledChunk>& chunks, std::size_t cap, std::uint64_t seed) {
    if (cap == 0) return;
    Rng rng(seed);
    for (std::size_t i = chunks.size() - 1; i > 0; --i)
        std::swap(chunks[i], chunks[rng.next_below(i + 1)]);
    std::map<int, std::size_t> kept;
    std::vector<data::LabeledChunk> out;
    for (auto& c : chunks)
        if (kept[c.label]++ < cap) out.push_back(std::move(c));
    chunks = std::move(out);
}

struct EvalCounts {
    std::uint64_t correct = 0, total = 0;
    double accuracy() const {
        return total == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(total);
    }
};

// Accuracy over windows whose true AP count is nonzero, matching how the
// scale-back algorithms count detections.
EvalCounts score_nonzero(const std::vector<detect::Decision>& decisions, int truth_count) {
    EvalCounts c;
    if (truth_count == 0) return c;
    for (const auto& d : decisions) {
        ++c.total;
        if (d.ap_count == truth_count) ++c.correct;
    }
    return c;
}

}  // namespace

SuiteArtifacts run_suite(const SuiteParams& p, int class_count) {
    SuiteArtifacts art;
    art.class_count = class_count;
    art.classes = suite_classes(class_count);
    art.label_base = art.classes.front();

    // chunk dataset for the model
    std::vector<data::RawTrace> raws;
    for (std::size_t s = 0; s < p.ml_seed_count; ++s)
        for (int k : art.classes) {
            const auto seed = derive_seed(p.seed_base, class_count, 0, k, s);
            auto cfg = make_scenario(k, p.distance_feet, p.sight, p.duty_cycle, p.period_ms,
                                     p.duration_s, seed);
            const auto trace = sim::simulate_scenario(cfg);
            data::RawTrace raw;
            raw.values = sim::energy_values(trace);
            raw.label = k - art.label_base;
            raw.source = "suite" + std::to_string(class_count);
            raws.push_back(std::move(raw));
        }
    {
        std::vector<data::LabeledChunk> chunks;
        for (const auto& t : raws) {
            auto c = data::chunk_trace(t, p.chunk_width);
            chunks.insert(chunks.end(), std::make_move_iterator(c.begin()),
                          std::make_move_iterator(c.end()));
        }
        cap_per_class(chunks, p.max_chunks_per_class, p.seed_base ^ 0x5ca1ab1eULL);
        auto [train, test] = data::split_shuffle(std::move(chunks), p.seed_base + 17);
        std::vector<double> train_values;
        for (const auto& c : train)
            train_values.insert(train_values.end(), c.values.begin(), c.values.end());
        const auto stats = data::compute_norm_stats(train_values);
        for (auto* half : {&train, &test})
            for (auto& c : *half) {
                data::clip_outliers_inplace(c.values, stats);
                data::normalize_inplace(c.values, stats);
            }
        art.model = nn::FcnModel::make(p.chunk_width, art.classes.size(),
                                       derive_seed(p.seed_base, class_count, 7, 0, 0));
        art.model.norm = stats;
        art.train_chunks = std::move(train);
        art.test_chunks = std::move(test);
    }
    art.history = nn::train(art.model, art.train_chunks, {}, p.train);
    art.ml_accuracy = nn::evaluate(art.model, art.test_chunks).accuracy;

    // threshold calibration on its own traces
    std::vector<sim::SimTrace> calib_traces;
    std::vector<detect::LabeledTrace> labeled;
    for (int k : art.classes)
        for (std::size_t s = 0; s < p.calib_seed_count; ++s) {
            const auto seed = derive_seed(p.seed_base, class_count, 1, k, s);
            auto cfg = make_scenario(k, p.distance_feet, p.sight, p.duty_cycle, p.period_ms,
                                     p.duration_s, seed);
            calib_traces.push_back(sim::simulate_scenario(cfg));
        }
    std::size_t idx = 0;
    for (int k : art.classes)
        for (std::size_t s = 0; s < p.calib_seed_count; ++s)
            labeled.push_back({&calib_traces[idx++], k});
    art.ed = detect::calibrate_ed_thresholds(labeled);
    art.ac = detect::calibrate_ac_ratios(labeled);

    // held-out evaluation
    for (std::size_t s = 0; s < p.eval_seed_count; ++s) {
        EvalCounts ed_c, ac_c, hd_c;
        for (int k : art.classes) {
            const auto seed = derive_seed(p.seed_base, class_count, 2, k, s);
            auto cfg = make_scenario(k, p.distance_feet, p.sight, p.duty_cycle, p.period_ms,
                                     p.duration_s, seed);
            const auto trace = sim::simulate_scenario(cfg);
            const auto ed_cnt = score_nonzero(detect::ed_detect(trace.energy, art.ed), k);
            const auto ac_cnt = score_nonzero(detect::ac_detect(trace.ac, art.ac), k);
            const auto hd_cnt = score_nonzero(
                detect::hd_detect(trace.beacons, cfg.duration_s, detect::HdConfig{}), k);
            ed_c.correct += ed_cnt.correct;
            ed_c.total += ed_cnt.total;
            ac_c.correct += ac_cnt.correct;
            ac_c.total += ac_cnt.total;
            hd_c.correct += hd_cnt.correct;
            hd_c.total += hd_cnt.total;
        }
        art.ed_seed_accuracy.push_back(ed_c.accuracy());
        art.ac_seed_accuracy.push_back(ac_c.accuracy());
        art.hd_seed_accuracy.push_back(hd_c.accuracy());
    }
    auto mean = [](const std::vector<double>& v) {
        double s = 0.0;
        for (double x : v) s += x;
        return v.empty() ? 0.0 : s / static_cast<double>(v.size());
    };
    art.ed_accuracy = mean(art.ed_seed_accuracy);
    art.ac_accuracy = mean(art.ac_seed_accuracy);
    art.hd_accuracy = mean(art.hd_seed_accuracy);
    return art;
}

DelayOutcome run_delay_suite(const SuiteParams& p, const SuiteArtifacts& six_class,
                             std::size_t seed_count, std::size_t ml_stride) {
    if (six_class.label_base != 0 || six_class.classes.size() != 6)
        throw std::invalid_argument("run_delay_suite: needs the six-class artifacts");
    DelayOutcome out;
    std::vector<double> hd_d, ed_d, ac_d, ml_d;
    for (std::size_t s = 0; s < seed_count; ++s) {
        const auto seed = derive_seed(p.seed_base, 6, 3, 5, s);
        auto cfg = make_scenario(5, p.distance_feet, p.sight, p.duty_cycle, p.period_ms,
                                 p.duration_s, seed);
        cfg.initial_ap_count = 4;
        cfg.change_points.push_back({0.3 * p.duration_s, 5});
        cfg.validate();
        const auto trace = sim::simulate_scenario(cfg);

        const auto hd = detect::hd_detect(trace.beacons, cfg.duration_s, detect::HdConfig{});
        const auto ed = detect::ed_detect(trace.energy, six_class.ed);
        const auto ac = detect::ac_detect(trace.ac, six_class.ac);
        const auto ml = rt::stream_infer(six_class.model, trace.energy, ml_stride);

        hd_d.push_back(rt::mean_delay(rt::measure_delay(hd, trace.truth)));
        ed_d.push_back(rt::mean_delay(rt::measure_delay(ed, trace.truth)));
        ac_d.push_back(rt::mean_delay(rt::measure_delay(ac, trace.truth)));
        ml_d.push_back(rt::mean_delay(rt::measure_delay(ml, trace.truth)));
    }
    auto mean = [](const std::vector<double>& v) {
        double s = 0.0;
        for (double x : v) s += x;
        return v.empty() ? 0.0 : s / static_cast<double>(v.size());
    };
    out.hd_mean_s = mean(hd_d);
    out.ed_mean_s = mean(ed_d);
    out.ac_mean_s = mean(ac_d);
    out.ml_mean_s = mean(ml_d);
    return out;
}

}  // namespace coexlab::bench

// Acceptance suite: drives the full pipeline at desk scale and checks each
// criterion at its stated tolerance, printing one PASS/FAIL line per
// criterion.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "coexlab/bench/harness.hpp"
#include "coexlab/data/dataset_io.hpp"
#include "coexlab/nn/fft.hpp"
#include "coexlab/nn/fft_conv.hpp"
#include "coexlab/nn/grad_check.hpp"
#include "coexlab/nn/ref_kernels.hpp"
#include "coexlab/runtime/runtime.hpp"
#include "coexlab/rng.hpp"

using namespace coexlab;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;

void report(int id, const std::string& name, bool pass, const std::string& detail) {
    std::printf("[%s] criterion %d: %s  (%s)\n", pass ? "PASS" : "FAIL", id, name.c_str(),
                detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

double minutes_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count() / 60.0;
}

std::string fmt2(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

// ---- criterion 1: numerical core ---------------------------------------

void criterion_1() {
    const auto t0 = Clock::now();
    Rng rng(100);
    double conv_worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t b = 1 + rng.next_below(3);
        const std::size_t c = 1 + rng.next_below(4);
        const std::size_t f = 1 + rng.next_below(5);
        const std::size_t k = 1 + rng.next_below(9);
        const std::size_t l = 1 + rng.next_below(48);
        nn::Tensor x(b, c, l);
        nn::FilterBank w(f, c, k);
        for (auto& v : x.data) v = rng.normal();
        for (auto& v : w.data) v = rng.normal();
        const nn::Tensor fast = nn::conv1d(x, w);
        const nn::Tensor ref = nn::ref::conv1d(x, w);
        for (std::size_t i = 0; i < fast.data.size(); ++i)
            conv_worst = std::max(conv_worst, std::abs(fast.data[i] - ref.data[i]));
    }

    double fft_worst = 0.0;
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t c = 1 + rng.next_below(3);
        const std::size_t f = 1 + rng.next_below(4);
        const std::size_t k = 1 + rng.next_below(8);
        const std::size_t l = 1 + rng.next_below(64);
        nn::Tensor x(1, c, l);
        nn::FilterBank w(f, c, k);
        for (auto& v : x.data) v = rng.normal();
        for (auto& v : w.data) v = rng.normal();
        const auto mask = nn::SpectralMask::full(nn::next_pow2(l + k - 1));
        const nn::Tensor direct = nn::conv1d(x, w);
        const nn::Tensor spectral = nn::fft_conv1d(x, w, mask);
        for (std::size_t i = 0; i < direct.data.size(); ++i)
            fft_worst = std::max(fft_worst, std::abs(direct.data[i] - spectral.data[i]));
    }

    const double g_conv = nn::grad_check_conv1d(2, 3, 4, 5, 12, 1e-5, 101);
    const double g_bn = nn::grad_check_batch_norm(3, 4, 6, 1e-5, 102);
    const double g_ce = nn::grad_check_dense_softmax_ce(6, 10, 4, 1e-5, 103);
    const double mins = minutes_since(t0);

    const bool pass = conv_worst <= 1e-10 && fft_worst <= 1e-6 && g_conv < 1e-4 &&
                      g_bn < 1e-3 && g_ce < 1e-5 && mins < 1.0;
    report(1, "numerical core", pass,
           "conv_vs_oracle=" + fmt2(conv_worst) + " fft_vs_conv=" + fmt2(fft_worst) +
               " grad_conv=" + fmt2(g_conv) + " grad_bn=" + fmt2(g_bn) + " grad_ce=" +
               fmt2(g_ce) + " runtime_min=" + fmt2(mins));
}

// ---- criterion 2: pipeline fidelity -------------------------------------

void criterion_2() {
    bool pass = true;
    std::string detail;

    data::RawTrace t;
    t.label = 1;
    t.values.resize(1000);
    for (std::size_t i = 0; i < t.values.size(); ++i) t.values[i] = static_cast<double>(i);
    const auto chunks = data::chunk_trace(t, 128);
    if (chunks.size() < 3 || chunks[0].values[0] != 0.0 || chunks[1].values[0] != 32.0 ||
        chunks[2].values[0] != 64.0) {
        pass = false;
        detail += "chunk starts wrong; ";
    }

    Rng rng(200);
    std::vector<double> train_values(50000);
    for (auto& v : train_values) v = -40.0 + 4.0 * rng.normal();
    const auto stats = data::compute_norm_stats(train_values);
    auto normed = data::normalize(train_values, stats);
    double mean = 0.0;
    for (double v : normed) mean += v;
    mean /= static_cast<double>(normed.size());
    double var = 0.0;
    for (double v : normed) var += (v - mean) * (v - mean);
    var /= static_cast<double>(normed.size());
    const double std_err = std::abs(std::sqrt(var) - 1.0);
    if (std::abs(mean) > 1e-6 || std_err > 1e-6) {
        pass = false;
        detail += "normalization off (mean=" + fmt2(mean) + " std_err=" + fmt2(std_err) + "); ";
    }

    std::vector<double> with_outlier = {stats.mu + 5.0 * stats.sigma, stats.mu,
                                        stats.mu - 4.5 * stats.sigma};
    const auto clipped = data::clip_outliers(with_outlier, stats);
    if (clipped[0] != stats.mu || clipped[2] != stats.mu || clipped[1] != stats.mu) {
        pass = false;
        detail += "outlier clip wrong; ";
    }

    std::vector<data::LabeledChunk> ds(100);
    for (auto& c : ds) {
        c.label = static_cast<int>(rng.next_below(6));
        c.values.resize(64);
        for (auto& v : c.values) v = rng.normal() * 11.7;
    }
    const auto path = (fs::temp_directory_path() / "coexlab_acc_ds.tsv").string();
    data::write_dataset(ds, path);
    const auto back = data::read_dataset(path);
    bool lossless = back.size() == ds.size();
    for (std::size_t i = 0; lossless && i < ds.size(); ++i)
        lossless = back[i].label == ds[i].label && back[i].values == ds[i].values;
    fs::remove(path);
    if (!lossless) {
        pass = false;
        detail += "dataset round-trip lossy; ";
    }
    if (detail.empty()) detail = "chunk starts 0/32/64, stats exact, round-trip lossless";
    report(2, "pipeline fidelity", pass, detail);
}

// ---- criteria 3/4/6/7: the standard suite --------------------------------

bench::SuiteParams standard_params() {
    bench::SuiteParams p;
    p.distance_feet = 6.0;
    p.sight = sim::Sight::Nlos;
    p.duration_s = 48.0;
    p.chunk_width = 512;
    p.ml_seed_count = 4;
    p.calib_seed_count = 4;
    p.eval_seed_count = 10;
    p.seed_base = 2026;
    p.train.optimizer = nn::Optimizer::Adam;
    p.train.lr = 1e-3;
    p.train.epochs = 4;
    p.train.batch = 32;
    p.train.seed = 5;
    return p;
}

std::vector<bench::SuiteArtifacts> g_suites;  // indexed by class_count - 2

void criterion_3() {
    const auto t0 = Clock::now();
    const auto p = standard_params();
    std::string detail = "test acc:";
    bool pass = true;
    for (int c = 2; c <= 6; ++c) {
        g_suites.push_back(bench::run_suite(p, c));
        const double acc = g_suites.back().ml_accuracy;
        detail += " c" + std::to_string(c) + "=" + fmt2(acc);
        if (acc < 0.95) pass = false;
    }
    const double mins = minutes_since(t0);
    detail += " train_min=" + fmt2(mins);
    if (mins > 30.0) pass = false;
    report(3, "ML accuracy analog", pass, detail);
}

void criterion_4() {
    bool ordering = true, trend = true, hd_ok = true;
    std::string detail;
    double prev_ed = 2.0, prev_ac = 2.0;
    for (const auto& a : g_suites) {
        if (!(a.ml_accuracy > a.ac_accuracy && a.ac_accuracy > a.ed_accuracy)) ordering = false;
        if (!(a.ed_accuracy < prev_ed)) trend = false;
        if (!(a.ac_accuracy < prev_ac)) trend = false;
        prev_ed = a.ed_accuracy;
        prev_ac = a.ac_accuracy;
        if (a.hd_accuracy < 1.0) hd_ok = false;
        detail += "c" + std::to_string(a.class_count) + "[ml=" + fmt2(a.ml_accuracy) +
                  " ac=" + fmt2(a.ac_accuracy) + " ed=" + fmt2(a.ed_accuracy) +
                  " hd=" + fmt2(a.hd_accuracy) + "] ";
    }
    report(4, "detector ordering", ordering && trend && hd_ok,
           detail + (ordering ? "" : "ordering violated; ") + (trend ? "" : "trend violated; ") +
               (hd_ok ? "" : "HD below 100%"));
}

// ---- criterion 5: chunk-width trend --------------------------------------

void criterion_5() {
    const auto t0 = Clock::now();
    auto p = standard_params();
    p.ml_seed_count = 1;
    const std::size_t widths[3] = {32, 128, 512};
    const std::size_t caps[3] = {150, 100, 0};
    double mean_acc[3] = {0.0, 0.0, 0.0};
    const int seeds = 10;
    for (int s = 0; s < seeds; ++s) {
        for (int wi = 0; wi < 3; ++wi) {
            auto ps = p;
            ps.seed_base = 3000 + static_cast<std::uint64_t>(s);
            ps.chunk_width = widths[wi];
            ps.max_chunks_per_class = caps[wi];
            ps.train.epochs = 3;
            const auto art = bench::run_suite(ps, 3);
            mean_acc[wi] += art.ml_accuracy / seeds;
        }
    }
    // width 1: near-chance for the 3-class task
    double w1_acc = 0.0;
    const int w1_seeds = 5;
    for (int s = 0; s < w1_seeds; ++s) {
        auto ps = p;
        ps.seed_base = 4000 + static_cast<std::uint64_t>(s);
        ps.chunk_width = 1;
        ps.max_chunks_per_class = 400;
        ps.train.epochs = 2;
        const auto art = bench::run_suite(ps, 3);
        w1_acc += art.ml_accuracy / w1_seeds;
    }
    const bool monotone = mean_acc[0] <= mean_acc[1] && mean_acc[1] <= mean_acc[2];
    const bool chance = std::abs(w1_acc - 1.0 / 3.0) <= 0.05;
    report(5, "chunk-width trend", monotone && chance,
           "mean acc w32=" + fmt2(mean_acc[0]) + " w128=" + fmt2(mean_acc[1]) + " w512=" +
               fmt2(mean_acc[2]) + " w1=" + fmt2(w1_acc) + " runtime_min=" +
               fmt2(minutes_since(t0)));
}

// ---- criterion 6: FFT compression ----------------------------------------

void criterion_6() {
    const auto t0 = Clock::now();
    bool pass = true;
    std::string detail;
    for (int c : {2, 3, 5}) {
        const auto& art = g_suites[static_cast<std::size_t>(c - 2)];
        const double base = nn::evaluate(art.model, art.test_chunks).accuracy;
        const double at60 = nn::evaluate_compressed(art.model, art.test_chunks, 0.60).accuracy;
        const double at95 = nn::evaluate_compressed(art.model, art.test_chunks, 0.95).accuracy;
        detail += "c" + std::to_string(c) + "[base=" + fmt2(base) + " at60=" + fmt2(at60) +
                  " at95=" + fmt2(at95) + "] ";
        if (c == 2 || c == 3) {
            if (at60 < 0.99 * base) pass = false;
        } else {
            if (at60 < base - 0.10) pass = false;
        }
        if (at60 < at95) pass = false;  // graceful degradation over the rate axis
    }
    const double mins = minutes_since(t0);
    detail += "runtime_min=" + fmt2(mins);
    if (mins > 20.0) pass = false;
    report(6, "FFT compression analog", pass, detail);
}

// ---- criterion 7: delay ordering ------------------------------------------

void criterion_7() {
    const auto p = standard_params();
    const auto& six = g_suites[4];
    const auto d = bench::run_delay_suite(p, six, 10, 128);

    // header decoding settles within two slots plus a beacon interval of the
    // change (slotting bound, before the two-read debounce)
    double hd_first = 0.0;
    int n = 0;
    for (std::size_t s = 0; s < 10; ++s) {
        const auto seed = Rng(p.seed_base).fork(6).fork(3).fork(5).fork(s).next_u64();
        auto cfg = bench::make_scenario(5, p.distance_feet, p.sight, p.duty_cycle, p.period_ms,
                                        p.duration_s, seed);
        cfg.initial_ap_count = 4;
        cfg.change_points.push_back({0.3 * p.duration_s, 5});
        const auto trace = sim::simulate_scenario(cfg);
        const auto hd = detect::hd_detect(trace.beacons, cfg.duration_s, detect::HdConfig{});
        for (const auto& dec : hd)
            if (dec.t >= 0.3 * p.duration_s && dec.ap_count == 5) {
                hd_first += dec.t - 0.3 * p.duration_s;
                ++n;
                break;
            }
    }
    hd_first /= n > 0 ? n : 1;

    const bool order = d.hd_mean_s < d.ml_mean_s && d.ml_mean_s < d.ac_mean_s &&
                       d.ac_mean_s < d.ed_mean_s;
    const bool hd_bound = n == 10 && hd_first <= 2.0 * 0.512 + 0.1024;
    report(7, "delay ordering", order && hd_bound,
           "mean delays s: hd=" + fmt2(d.hd_mean_s) + " ml=" + fmt2(d.ml_mean_s) + " ac=" +
               fmt2(d.ac_mean_s) + " ed=" + fmt2(d.ed_mean_s) + " hd_first=" + fmt2(hd_first));
}

// ---- criterion 8: runtime equivalence -------------------------------------

void criterion_8() {
    const auto p = standard_params();
    const auto& art = g_suites[0];  // two-class model
    // a fresh recorded trace
    auto cfg = bench::make_scenario(2, p.distance_feet, p.sight, p.duty_cycle, p.period_ms,
                                    24.0, 777);
    const auto trace = sim::simulate_scenario(cfg);
    const auto live = rt::stream_infer(art.model, trace.energy, 128);
    const auto batch = rt::batch_infer(art.model, trace.energy, 128);
    bool equal = live.size() == batch.size() && !live.empty();
    for (std::size_t i = 0; equal && i < live.size(); ++i)
        equal = live[i].t == batch[i].t && live[i].ap_count == batch[i].ap_count;

    // 1% isolated label noise never flips the debounced state
    Rng rng(300);
    int flips = 0;
    const int trials = 20000;
    rt::Debounce db(3);
    bool last_noise = false;
    for (int i = 0; i < trials; ++i) {
        int cls = 3;
        if (!last_noise && rng.next_double() < 0.01) {
            cls = static_cast<int>(rng.next_below(6));
            last_noise = true;
        } else {
            last_noise = false;
        }
        if (db.push(cls)) ++flips;
    }
    report(8, "runtime equivalence", equal && flips == 0,
           "stream==batch over " + std::to_string(live.size()) + " windows, debounce flips=" +
               std::to_string(flips));
}

// ---- criterion 9: determinism ---------------------------------------------

std::string file_bytes(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void criterion_9() {
    bool pass = true;
    std::string detail;

    // library level: bit-identical traces and checkpoints
    auto cfg = bench::make_scenario(3, 6.0, sim::Sight::Nlos, 0.5, 40.0, 12.0, 55);
    const auto a = sim::simulate_scenario(cfg);
    const auto b = sim::simulate_scenario(cfg);
    if (a.energy.size() != b.energy.size()) pass = false;
    for (std::size_t i = 0; pass && i < a.energy.size(); ++i)
        if (a.energy[i].dbm != b.energy[i].dbm) pass = false;
    if (!pass) detail += "sim not reproducible; ";

    // command level, if the CLI is available
    const char* cli = std::getenv("COEXLAB_CLI");
    if (cli) {
        const auto tmp = fs::temp_directory_path() / "coexlab_acc_cli";
        fs::create_directories(tmp);
        std::ofstream(tmp / "s.cfg") << "duty_cycle = 0.5\nperiod_ms = 40\nduration_s = 8\n"
                                     << "seed = 9\nap = 6 NLOS\nap = 6 NLOS\n";
        const std::string base = std::string(cli);
        auto run = [&](const std::string& args) {
            const std::string cmd = base + " " + args + " >/dev/null 2>&1";
            return std::system(cmd.c_str()) == 0;
        };
        bool ok = run("simulate --config " + (tmp / "s.cfg").string() + " --out " +
                      (tmp / "a").string());
        ok = ok && run("simulate --config " + (tmp / "s.cfg").string() + " --out " +
                       (tmp / "b").string());
        if (!ok || file_bytes(tmp / "a" / "energy.csv") != file_bytes(tmp / "b" / "energy.csv")) {
            pass = false;
            detail += "CLI simulate bytes differ; ";
        }
        fs::remove_all(tmp);
    }

    if (detail.empty()) detail = "bit-identical traces and command outputs";
    report(9, "determinism", pass, detail);
}

}  // namespace

int main() {
    const auto t0 = Clock::now();
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    std::printf("acceptance: %d criterion(s) failed, total %.1f min\n", g_failures,
                minutes_since(t0));
    return g_failures == 0 ? 0 : 1;
}

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "coexlab/bench/harness.hpp"
#include "coexlab/data/dataset_io.hpp"
#include "coexlab/nn/fft_conv.hpp"
#include "coexlab/runtime/runtime.hpp"
#include "coexlab/sim/trace.hpp"

namespace {

using namespace coexlab;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitMissing = 3;
constexpr int kExitNumeric = 4;

std::string fmt(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

void write_norm_stats(const data::NormStats& s, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << "mu = " << fmt(s.mu) << "\n";
    out << "sigma = " << fmt(s.sigma) << "\n";
    out << "outlier_k = " << fmt(s.outlier_k) << "\n";
    out << "from_training = " << (s.from_training ? 1 : 0) << "\n";
}

data::NormStats read_norm_stats(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path);
    data::NormStats s;
    std::string key, eq;
    double v;
    while (in >> key >> eq >> v) {
        if (key == "mu")
            s.mu = v;
        else if (key == "sigma")
            s.sigma = v;
        else if (key == "outlier_k")
            s.outlier_k = v;
        else if (key == "from_training")
            s.from_training = v != 0;
    }
    return s;
}

std::vector<sim::EnergySample> read_energy_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::vector<sim::EnergySample> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line_no == 1) {
            if (line != "t_s,dbm")
                throw std::invalid_argument(path + ": expected header t_s,dbm");
            continue;
        }
        if (line.empty()) continue;
        const char* p = line.data();
        const char* end = p + line.size();
        sim::EnergySample s;
        auto r1 = std::from_chars(p, end, s.t);
        if (r1.ec != std::errc() || r1.ptr == end || *r1.ptr != ',')
            throw std::invalid_argument(path + ":" + std::to_string(line_no) + ": bad line");
        auto r2 = std::from_chars(r1.ptr + 1, end, s.dbm);
        if (r2.ec != std::errc())
            throw std::invalid_argument(path + ":" + std::to_string(line_no) + ": bad line");
        out.push_back(s);
    }
    return out;
}

// ---- subcommand implementations ----------------------------------------

int cmd_simulate(const std::string& config_path, const std::string& out_dir,
                 std::int64_t seed_override) {
    auto cfg = sim::load_scenario(config_path);
    if (seed_override >= 0) cfg.seed = static_cast<std::uint64_t>(seed_override);
    const auto trace = sim::simulate_scenario(cfg);
    sim::write_trace(trace, out_dir);
    std::cout << "wrote " << trace.energy.size() << " energy samples, " << trace.ac.size()
              << " ac values, " << trace.beacons.size() << " beacons to " << out_dir << "\n";
    return kExitOk;
}

int cmd_prepare(const std::vector<std::string>& trace_dirs, std::size_t width,
                std::uint64_t seed, bool trace_disjoint, const std::string& out_dir) {
    std::vector<data::RawTrace> raws;
    for (const auto& dir : trace_dirs) {
        const auto trace = sim::read_trace(dir);
        auto segs = bench::segments_by_truth(trace, dir);
        for (auto& s : segs) raws.push_back(std::move(s));
    }
    if (raws.empty()) throw std::invalid_argument("prepare: no usable trace segments");
    for (const auto& r : raws)
        if (r.values.size() < width)
            std::cerr << "warning: segment " << r.source << " shorter than width, skipped\n";

    std::vector<data::LabeledChunk> train, test;
    data::NormStats stats;
    if (trace_disjoint) {
        // stricter mode: whole traces go to one side
        std::vector<data::LabeledChunk> train_raw, test_raw;
        for (std::size_t i = 0; i < raws.size(); ++i) {
            auto chunks = data::chunk_trace(raws[i], width);
            auto& dst = (i % 2 == 0) ? train_raw : test_raw;
            dst.insert(dst.end(), std::make_move_iterator(chunks.begin()),
                       std::make_move_iterator(chunks.end()));
        }
        std::vector<double> train_values;
        for (const auto& c : train_raw)
            train_values.insert(train_values.end(), c.values.begin(), c.values.end());
        stats = data::compute_norm_stats(train_values);
        for (auto* half : {&train_raw, &test_raw})
            for (auto& c : *half) {
                data::clip_outliers_inplace(c.values, stats);
                data::normalize_inplace(c.values, stats);
            }
        train = std::move(train_raw);
        test = std::move(test_raw);
    } else {
        auto ds = bench::prepare_dataset(raws, width, seed);
        train = std::move(ds.train);
        test = std::move(ds.test);
        stats = ds.stats;
    }

    std::filesystem::create_directories(out_dir);
    data::write_dataset(train, out_dir + "/train.tsv");
    data::write_dataset(test, out_dir + "/test.tsv");
    write_norm_stats(stats, out_dir + "/normstats.txt");
    std::cout << "wrote " << train.size() << " train / " << test.size() << " test chunks to "
              << out_dir << "\n";
    return kExitOk;
}

int cmd_calibrate(const std::string& detector, const std::vector<std::string>& trace_dirs,
                  const std::string& out_path) {
    std::vector<sim::SimTrace> traces;
    std::vector<detect::LabeledTrace> labeled;
    traces.reserve(trace_dirs.size());
    for (const auto& dir : trace_dirs) traces.push_back(sim::read_trace(dir));
    for (auto& t : traces) {
        if (t.truth.size() != 1)
            throw std::invalid_argument("calibrate: traces must have a constant AP count");
        labeled.push_back({&t, t.truth.front().ap_count});
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + out_path);
    if (detector == "ed") {
        const auto th = detect::calibrate_ed_thresholds(labeled);
        out << "detector = ed\n";
        out << "warning = " << (th.warning ? 1 : 0) << "\n";
        for (std::size_t i = 0; i < th.alphas.size(); ++i)
            out << "alpha_" << (i + 1) << " = " << fmt(th.alphas[i]) << "\n";
    } else if (detector == "ac") {
        const auto cfg = detect::calibrate_ac_ratios(labeled);
        out << "detector = ac\n";
        out << "th_rho = " << fmt(cfg.th_rho) << "\n";
        out << "warning = " << (cfg.warning ? 1 : 0) << "\n";
        for (std::size_t i = 0; i < cfg.ratios.size(); ++i)
            out << "ratio_" << (i + 1) << " = " << fmt(cfg.ratios[i]) << "\n";
    } else {
        throw std::invalid_argument("calibrate: detector must be ed or ac");
    }
    std::cout << "wrote " << out_path << "\n";
    return kExitOk;
}

nn::TrainConfig make_train_config(const std::string& optimizer, double lr, std::size_t epochs,
                                  std::size_t batch, std::uint64_t seed) {
    nn::TrainConfig cfg;
    if (optimizer == "sgd") {
        cfg.optimizer = nn::Optimizer::Sgd;
        cfg.lr = lr > 0 ? lr : 1e-4;
    } else if (optimizer == "adam") {
        cfg.optimizer = nn::Optimizer::Adam;
        cfg.lr = lr > 0 ? lr : 1e-3;
    } else {
        throw std::invalid_argument("train: optimizer must be sgd or adam");
    }
    cfg.epochs = epochs;
    cfg.batch = batch;
    cfg.seed = seed;
    return cfg;
}

int cmd_train(const std::string& dataset_dir, std::size_t classes, const std::string& optimizer,
              double lr, std::size_t epochs, std::size_t batch, std::uint64_t seed,
              const std::string& out_model, const std::string& out_history) {
    const auto train_set = data::read_dataset(dataset_dir + "/train.tsv");
    if (train_set.empty()) throw std::invalid_argument("train: empty training set");
    const auto stats = read_norm_stats(dataset_dir + "/normstats.txt");
    const std::size_t width = train_set.front().values.size();

    int max_label = 0;
    for (const auto& c : train_set) max_label = std::max(max_label, c.label);
    if (classes == 0) classes = static_cast<std::size_t>(max_label) + 1;

    auto model = nn::FcnModel::make(width, classes, seed);
    model.norm = stats;
    const auto cfg = make_train_config(optimizer, lr, epochs, batch, seed);
    const auto history = nn::train(model, train_set, {}, cfg);
    nn::save_model(model, out_model);
    if (!out_history.empty()) nn::write_history_csv(history, out_history);
    const auto& last = history.epochs.back();
    std::cout << "final train_acc=" << last.train_acc << " val_acc=" << last.val_acc << "\n";
    std::cout << "wrote " << out_model << "\n";
    return kExitOk;
}

int cmd_eval(const std::string& model_path, const std::string& dataset_path, double compression,
             const std::string& report_path) {
    const auto model = nn::load_model(model_path);
    const auto set = data::read_dataset(dataset_path);
    const auto r = compression > 0.0 ? nn::evaluate_compressed(model, set, compression)
                                     : nn::evaluate(model, set);
    std::ostringstream body;
    body << "dataset = " << dataset_path << "\n";
    body << "chunks = " << set.size() << "\n";
    body << "compression = " << fmt(compression) << "\n";
    body << "loss = " << fmt(r.loss) << "\n";
    body << "accuracy = " << fmt(r.accuracy) << "\n";
    if (!report_path.empty()) {
        std::ofstream out(report_path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot open for writing: " + report_path);
        out << body.str();
    }
    std::cout << body.str();
    return kExitOk;
}

int cmd_infer(const std::string& model_path, const std::string& input_csv, std::size_t stride,
              const std::string& out_csv) {
    const auto model = nn::load_model(model_path);
    if (stride == 0) stride = std::max<std::size_t>(1, model.width / 4);
    const auto samples = read_energy_csv(input_csv);
    rt::StreamInference stream(model, stride);
    rt::Debounce debounce(0);
    std::ofstream out(out_csv, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + out_csv);
    out << "t_s,class,duty_cycle\n";
    auto duty = rt::csat_set_duty(0);
    for (const auto& s : samples) {
        const auto d = stream.push(s.t, s.dbm);
        if (!d) continue;
        if (auto changed = debounce.push(d->ap_count)) duty = rt::csat_set_duty(*changed);
        out << fmt(d->t) << ',' << d->ap_count << ',' << fmt(duty.duty_cycle) << '\n';
    }
    std::cout << "wrote " << out_csv << "\n";
    return kExitOk;
}

// ---- bench --------------------------------------------------------------

struct BenchSpec {
    std::vector<double> distances = {6.0};
    std::vector<sim::Sight> sights = {sim::Sight::Nlos};
    std::vector<int> class_counts = {2, 3, 4, 5, 6};
    std::size_t eval_seeds = 10;
    std::size_t ml_seeds = 4;
    std::size_t calib_seeds = 4;
    std::size_t delay_seeds = 10;
    double duration_s = 48.0;
    std::size_t width = 512;
    std::string optimizer = "adam";
    double lr = 0.0;
    std::size_t epochs = 4;
    std::size_t batch = 32;
    std::size_t max_chunks_per_class = 0;
    std::size_t stride = 128;
    std::vector<double> compression_rates = {0.0, 0.2, 0.4, 0.6, 0.8, 0.95};
    std::uint64_t seed = 1;
};

BenchSpec load_bench_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path);
    BenchSpec spec;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream f(line);
        std::string key, eq;
        if (!(f >> key)) continue;
        if (!(f >> eq) || eq != "=")
            throw std::invalid_argument(path + ":" + std::to_string(line_no) +
                                        ": expected key = value");
        auto read_doubles = [&] {
            std::vector<double> v;
            double x;
            while (f >> x) v.push_back(x);
            return v;
        };
        if (key == "distances") {
            spec.distances = read_doubles();
        } else if (key == "sights") {
            spec.sights.clear();
            std::string s;
            while (f >> s) spec.sights.push_back(sim::sight_from_string(s));
        } else if (key == "class_counts") {
            spec.class_counts.clear();
            int c;
            while (f >> c) spec.class_counts.push_back(c);
        } else if (key == "compression_rates") {
            spec.compression_rates = read_doubles();
        } else if (key == "eval_seeds") {
            f >> spec.eval_seeds;
        } else if (key == "ml_seeds") {
            f >> spec.ml_seeds;
        } else if (key == "calib_seeds") {
            f >> spec.calib_seeds;
        } else if (key == "delay_seeds") {
            f >> spec.delay_seeds;
        } else if (key == "duration_s") {
            f >> spec.duration_s;
        } else if (key == "width") {
            f >> spec.width;
        } else if (key == "optimizer") {
            f >> spec.optimizer;
        } else if (key == "lr") {
            f >> spec.lr;
        } else if (key == "epochs") {
            f >> spec.epochs;
        } else if (key == "batch") {
            f >> spec.batch;
        } else if (key == "max_chunks_per_class") {
            f >> spec.max_chunks_per_class;
        } else if (key == "stride") {
            f >> spec.stride;
        } else if (key == "seed") {
            f >> spec.seed;
        } else {
            throw std::invalid_argument(path + ":" + std::to_string(line_no) +
                                        ": unknown key '" + key + "'");
        }
    }
    return spec;
}

int cmd_bench(const std::string& spec_path, const std::string& out_dir) {
    const auto spec = load_bench_spec(spec_path);
    std::filesystem::create_directories(out_dir);

    bool did_delay = false;
    for (double dist : spec.distances) {
        for (auto sight : spec.sights) {
            bench::SuiteParams p;
            p.distance_feet = dist;
            p.sight = sight;
            p.duration_s = spec.duration_s;
            p.chunk_width = spec.width;
            p.ml_seed_count = spec.ml_seeds;
            p.calib_seed_count = spec.calib_seeds;
            p.eval_seed_count = spec.eval_seeds;
            p.max_chunks_per_class = spec.max_chunks_per_class;
            p.seed_base = spec.seed;
            p.train = make_train_config(spec.optimizer, spec.lr, spec.epochs, spec.batch,
                                        spec.seed);

            const std::string tag =
                std::to_string(static_cast<int>(dist)) + "ft_" + sim::to_string(sight);
            std::string table = "class_count,hd,ed,ac,ml,ed_std,ac_std\n";
            const bench::SuiteArtifacts* six = nullptr;
            std::vector<bench::SuiteArtifacts> arts;
            for (int c : spec.class_counts) {
                std::cerr << "suite " << tag << " classes=" << c << "\n";
                arts.push_back(bench::run_suite(p, c));
            }
            for (const auto& a : arts) {
                auto stdev = [](const std::vector<double>& v, double m) {
                    if (v.size() < 2) return 0.0;
                    double s = 0.0;
                    for (double x : v) s += (x - m) * (x - m);
                    return std::sqrt(s / static_cast<double>(v.size() - 1));
                };
                table += std::to_string(a.class_count) + ',' + fmt(a.hd_accuracy) + ',' +
                         fmt(a.ed_accuracy) + ',' + fmt(a.ac_accuracy) + ',' +
                         fmt(a.ml_accuracy) + ',' +
                         fmt(stdev(a.ed_seed_accuracy, a.ed_accuracy)) + ',' +
                         fmt(stdev(a.ac_seed_accuracy, a.ac_accuracy)) + '\n';
                if (a.class_count == 6) six = &a;
            }
            {
                std::ofstream out(out_dir + "/accuracy_" + tag + ".csv", std::ios::binary);
                out << table;
            }
            // compression curves per class count
            for (const auto& a : arts) {
                std::string curve = "compression_rate,accuracy\n";
                for (double r : spec.compression_rates) {
                    const double acc =
                        r > 0.0 ? nn::evaluate_compressed(a.model, a.test_chunks, r).accuracy
                                : nn::evaluate(a.model, a.test_chunks).accuracy;
                    curve += fmt(r) + ',' + fmt(acc) + '\n';
                }
                std::ofstream out(out_dir + "/compression_" + tag + "_c" +
                                      std::to_string(a.class_count) + ".csv",
                                  std::ios::binary);
                out << curve;
            }
            // delay table once, on the first configuration that has a
            // six-class suite
            if (six && !did_delay && spec.delay_seeds > 0) {
                const auto d = bench::run_delay_suite(p, *six, spec.delay_seeds, spec.stride);
                std::ofstream out(out_dir + "/delay.csv", std::ios::binary);
                out << "detector,mean_delay_s\n";
                out << "hd," << fmt(d.hd_mean_s) << "\n";
                out << "ml," << fmt(d.ml_mean_s) << "\n";
                out << "ac," << fmt(d.ac_mean_s) << "\n";
                out << "ed," << fmt(d.ed_mean_s) << "\n";
                did_delay = true;
            }
        }
    }
    std::cout << "bench tables written to " << out_dir << "\n";
    return kExitOk;
}

int dispatch(int argc, char** argv) {
    CLI::App app{"LTE-U/Wi-Fi coexistence lab: simulator, detectors, FCN classifier"};
    app.require_subcommand(1);

    std::string config_path, out_path, model_path, dataset_path, input_path, report_path;
    std::string detector, optimizer = "adam", history_path;
    std::vector<std::string> trace_dirs;
    std::int64_t seed_override = -1;
    std::uint64_t seed = 1;
    std::size_t width = 512, epochs = 100, batch = 32, classes = 0, stride = 0;
    double lr = 0.0, compression = 0.0;
    bool trace_disjoint = false;

    auto* sim_cmd = app.add_subcommand("simulate", "run a scenario and write its trace");
    sim_cmd->add_option("--config", config_path, "scenario file")->required();
    sim_cmd->add_option("--out", out_path, "output directory")->required();
    sim_cmd->add_option("--seed", seed_override, "override the scenario seed");

    auto* prep_cmd = app.add_subcommand("prepare", "build a chunked train/test dataset");
    prep_cmd->add_option("--trace", trace_dirs, "trace directories")->required();
    prep_cmd->add_option("--w", width, "chunk width");
    prep_cmd->add_option("--seed", seed, "shuffle seed");
    prep_cmd->add_flag("--trace-disjoint", trace_disjoint,
                       "split whole traces instead of shuffled chunks");
    prep_cmd->add_option("--out", out_path, "output directory")->required();

    auto* cal_cmd = app.add_subcommand("calibrate", "fit ED/AC thresholds from traces");
    cal_cmd->add_option("--detector", detector, "ed or ac")->required();
    cal_cmd->add_option("--trace", trace_dirs, "labeled trace directories")->required();
    cal_cmd->add_option("--out", out_path, "threshold file")->required();

    auto* train_cmd = app.add_subcommand("train", "train the FCN on a prepared dataset");
    train_cmd->add_option("--dataset", dataset_path, "dataset directory")->required();
    train_cmd->add_option("--classes", classes, "class count (default: from labels)");
    train_cmd->add_option("--optimizer", optimizer, "sgd or adam");
    train_cmd->add_option("--lr", lr, "learning rate (0: optimizer default)");
    train_cmd->add_option("--epochs", epochs, "training epochs");
    train_cmd->add_option("--batch", batch, "mini-batch size");
    train_cmd->add_option("--seed", seed, "init/shuffle seed");
    train_cmd->add_option("--out", out_path, "model checkpoint")->required();
    train_cmd->add_option("--history", history_path, "per-epoch history csv");

    auto* eval_cmd = app.add_subcommand("eval", "evaluate a model on a dataset file");
    eval_cmd->add_option("--model", model_path, "model checkpoint")->required();
    eval_cmd->add_option("--dataset", dataset_path, "dataset .tsv")->required();
    eval_cmd->add_option("--compression", compression, "FFT compression rate in [0,1)");
    eval_cmd->add_option("--report", report_path, "report file");

    auto* infer_cmd = app.add_subcommand("infer", "stream a recorded trace through a model");
    infer_cmd->add_option("--model", model_path, "model checkpoint")->required();
    infer_cmd->add_option("--input", input_path, "energy csv (t_s,dbm)")->required();
    infer_cmd->add_option("--stride", stride, "decision stride in samples (default w/4)");
    infer_cmd->add_option("--out", out_path, "decision csv")->required();

    auto* bench_cmd = app.add_subcommand("bench", "run detector comparison suites");
    bench_cmd->add_option("--spec", config_path, "bench spec file")->required();
    bench_cmd->add_option("--out", out_path, "output directory")->required();

    CLI11_PARSE(app, argc, argv);

    if (sim_cmd->parsed()) return cmd_simulate(config_path, out_path, seed_override);
    if (prep_cmd->parsed()) return cmd_prepare(trace_dirs, width, seed, trace_disjoint, out_path);
    if (cal_cmd->parsed()) return cmd_calibrate(detector, trace_dirs, out_path);
    if (train_cmd->parsed())
        return cmd_train(dataset_path, classes, optimizer, lr, epochs, batch, seed, out_path,
                         history_path);
    if (eval_cmd->parsed()) return cmd_eval(model_path, dataset_path, compression, report_path);
    if (infer_cmd->parsed()) return cmd_infer(model_path, input_path, stride, out_path);
    if (bench_cmd->parsed()) return cmd_bench(config_path, out_path);
    return kExitConfig;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return dispatch(argc, argv);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::runtime_error& e) {
        const std::string msg = e.what();
        std::cerr << "error: " << msg << "\n";
        if (msg.find("cannot open") != std::string::npos ||
            msg.find("not a model file") != std::string::npos)
            return kExitMissing;
        return kExitNumeric;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumeric;
    }
}

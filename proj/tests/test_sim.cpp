#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <filesystem>

#include "coexlab/sim/simulate.hpp"
#include "coexlab/sim/trace.hpp"

using namespace coexlab;
using namespace coexlab::sim;

namespace {

ScenarioConfig base_config(int aps, double duration = 30.0, std::uint64_t seed = 1) {
    ScenarioConfig cfg;
    for (int i = 0; i < aps; ++i) cfg.ap_list.push_back({6.0, Sight::Nlos});
    cfg.duration_s = duration;
    cfg.seed = seed;
    return cfg;
}

double mean_energy(const SimTrace& t) {
    double s = 0.0;
    for (const auto& e : t.energy) s += e.dbm;
    return s / static_cast<double>(t.energy.size());
}

}  // namespace

TEST_CASE("idle channel: every sample is the noise floor, no beacons") {
    auto cfg = base_config(0);
    const auto trace = simulate_scenario(cfg);
    CHECK(!trace.energy.empty());
    for (const auto& e : trace.energy) REQUIRE(e.dbm == cfg.path_loss.noise_floor_dbm);
    CHECK(trace.beacons.empty());
    CHECK(trace.stats.wifi_tx == 0);
}

TEST_CASE("one AP over 60 s delivers roughly 586 beacons") {
    auto cfg = base_config(1, 60.0);
    const auto trace = simulate_scenario(cfg);
    // 60 / 0.1024 = 585.9 schedule points; contention can only delay
    CHECK(trace.beacons.size() >= 575);
    CHECK(trace.beacons.size() <= 590);
    for (const auto& b : trace.beacons) CHECK(b.bssid == 1);
}

TEST_CASE("single station never collides") {
    auto cfg = base_config(1, 20.0);
    const auto trace = simulate_scenario(cfg);
    CHECK(trace.stats.wifi_collisions == 0);
    CHECK(trace.stats.wifi_tx > 0);
}

TEST_CASE("five APs out-measure one AP on the same seed") {
    const auto t1 = simulate_scenario(base_config(1, 30.0, 7));
    const auto t5 = simulate_scenario(base_config(5, 30.0, 7));
    CHECK(mean_energy(t5) > mean_energy(t1));
}

TEST_CASE("mean energy is nondecreasing in AP count across seeds") {
    // fixed geometry, 10-seed families per count
    double prev = -1e9;
    for (int k = 0; k <= 5; ++k) {
        double acc = 0.0;
        for (std::uint64_t s = 1; s <= 10; ++s)
            acc += mean_energy(simulate_scenario(base_config(k, 30.0, s)));
        acc /= 10.0;
        CHECK(acc >= prev);
        prev = acc;
    }
}

TEST_CASE("identical config reproduces a bit-identical trace") {
    auto cfg = base_config(3, 20.0, 42);
    const auto a = simulate_scenario(cfg);
    const auto b = simulate_scenario(cfg);
    REQUIRE(a.energy.size() == b.energy.size());
    for (std::size_t i = 0; i < a.energy.size(); ++i) {
        REQUIRE(a.energy[i].t == b.energy[i].t);
        REQUIRE(a.energy[i].dbm == b.energy[i].dbm);
    }
    REQUIRE(a.ac.size() == b.ac.size());
    for (std::size_t i = 0; i < a.ac.size(); ++i) REQUIRE(a.ac[i].rho == b.ac[i].rho);
    REQUIRE(a.beacons.size() == b.beacons.size());
    CHECK(a.stats.wifi_tx == b.stats.wifi_tx);
    CHECK(a.stats.wifi_collisions == b.stats.wifi_collisions);
}

TEST_CASE("no observation timestamp falls into an ON interval") {
    auto cfg = base_config(2, 15.0, 3);
    cfg.lteu.duty_cycle = 0.5;
    cfg.lteu.period_ms = 40.0;
    const auto trace = simulate_scenario(cfg);
    const double T = cfg.lteu.period_ms / 1000.0;
    const double on = cfg.lteu.duty_cycle * T;
    for (const auto& e : trace.energy) {
        const double u = e.t - std::floor(e.t / T) * T;
        REQUIRE(u >= on);
    }
    for (const auto& a : trace.ac) {
        const double u = a.t - std::floor(a.t / T) * T;
        REQUIRE(u >= on);
    }
}

TEST_CASE("ON airtime share matches the configured duty cycle within 1%") {
    for (double duty : {0.33, 0.5, 0.95}) {
        auto cfg = base_config(1, 12.0, 5);
        cfg.lteu.duty_cycle = duty;
        const auto trace = simulate_scenario(cfg);
        CHECK(std::abs(trace.stats.lteu_on_airtime_s / cfg.duration_s - duty) < 0.01);
    }
}

TEST_CASE("sample count at 50% duty is about half the tick grid") {
    auto cfg = base_config(1, 60.0, 2);
    const auto trace = simulate_scenario(cfg);
    // 192 Hz * 60 s = 11520 ticks, half of them OFF
    CHECK(trace.energy.size() > 5500);
    CHECK(trace.energy.size() < 6100);
}

TEST_CASE("energy range of two 6 ft NLOS APs brackets the reported band") {
    // calibration target: samples roughly within [-52, -22] dBm
    auto cfg = base_config(2, 60.0, 9);
    const auto trace = simulate_scenario(cfg);
    double lo = 1e9, hi = -1e9;
    for (const auto& e : trace.energy) {
        lo = std::min(lo, e.dbm);
        hi = std::max(hi, e.dbm);
    }
    CHECK(lo < -37.5);
    CHECK(lo > -60.0);
    CHECK(hi > -27.0);
    CHECK(hi < -18.0);
}

TEST_CASE("change points drive the truth timeline and the observables") {
    auto cfg = base_config(5, 30.0, 11);
    cfg.initial_ap_count = 1;
    cfg.change_points.push_back({10.0, 4});
    cfg.change_points.push_back({20.0, 2});
    const auto trace = simulate_scenario(cfg);
    CHECK(trace.truth_at(5.0) == 1);
    CHECK(trace.truth_at(15.0) == 4);
    CHECK(trace.truth_at(25.0) == 2);
    double early = 0.0, mid = 0.0;
    std::size_t n_early = 0, n_mid = 0;
    for (const auto& e : trace.energy) {
        if (e.t < 10.0) {
            early += e.dbm;
            ++n_early;
        } else if (e.t < 20.0) {
            mid += e.dbm;
            ++n_mid;
        }
    }
    CHECK(mid / n_mid > early / n_early);
}

TEST_CASE("trace round-trips through the CSV exporter") {
    auto cfg = base_config(2, 8.0, 13);
    cfg.change_points.push_back({4.0, 1});
    const auto trace = simulate_scenario(cfg);
    const auto dir = std::filesystem::temp_directory_path() / "coexlab_trace_rt";
    write_trace(trace, dir.string());
    const auto back = read_trace(dir.string());
    REQUIRE(back.energy.size() == trace.energy.size());
    for (std::size_t i = 0; i < trace.energy.size(); ++i) {
        REQUIRE(back.energy[i].t == trace.energy[i].t);
        REQUIRE(back.energy[i].dbm == trace.energy[i].dbm);
    }
    REQUIRE(back.ac.size() == trace.ac.size());
    REQUIRE(back.beacons.size() == trace.beacons.size());
    REQUIRE(back.truth.size() == trace.truth.size());
    std::filesystem::remove_all(dir);
}

TEST_CASE("invalid configurations are rejected") {
    auto cfg = base_config(2);
    cfg.lteu.duty_cycle = 1.5;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = base_config(2);
    cfg.change_points = {{5.0, 1}, {5.0, 2}};
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = base_config(2);
    cfg.ap_list[0].distance_feet = 0.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

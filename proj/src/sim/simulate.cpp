#include "coexlab/sim/simulate.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>

#include "coexlab/sim/channel.hpp"
#include "coexlab/sim/dcf.hpp"

namespace coexlab::sim {
namespace {

// Fixed gain offsets of the lab's AP units, ascending and concave so the
// class-conditional energy means grow but with saturating separations as
// units accumulate.
constexpr double kApOffsetPattern[5] = {-3.0, -1.2, -0.45, -0.15, 0.0};

// Rate diversity across the units: effective frame airtime multiplier per
// AP index, ascending so aggregate airtime stays monotone in AP count.
constexpr double kApAirtimePattern[5] = {0.6, 0.8, 1.0, 1.3, 1.6};

struct Transmission {
    double start = 0.0;
    double end = 0.0;
    double power_mw = 0.0;
};

struct Station {
    DcfStationState st;
    Rng backoff_rng{0};
    Rng phase_rng{0};
};

class Simulator {
public:
    explicit Simulator(const ScenarioConfig& cfg)
        : cfg_(cfg),
          fading_rng_(Rng(cfg.seed).fork(3)),
          rho_rng_(Rng(cfg.seed).fork(5)) {
        cfg_.validate();
        const Rng root(cfg.seed);
        Rng shadow = root.fork(1);
        stations_.resize(cfg_.ap_list.size());
        for (std::size_t i = 0; i < stations_.size(); ++i) {
            auto& s = stations_[i];
            s.st.bssid = static_cast<int>(i) + 1;
            const auto& ap = cfg_.ap_list[i];
            const double loss = path_loss_db(ap.distance_feet, ap.sight, cfg_.path_loss, shadow);
            s.st.rx_power_dbm = cfg_.path_loss.tx_power_dbm - loss +
                                kApOffsetPattern[i] * cfg_.tuning.ap_offset_scale_db;
            s.backoff_rng = root.fork(10 + i);
            s.phase_rng = root.fork(100 + i);
        }
    }

    SimTrace run() {
        build_truth();
        set_active_count(trace_.truth.front().ap_count, 0.0);
        run_mac();
        sample_energy_pass();
        sample_ac_pass();
        return std::move(trace_);
    }

private:
    double period_s() const { return cfg_.lteu.period_ms / 1000.0; }
    double on_len() const { return cfg_.lteu.duty_cycle * period_s(); }

    void build_truth() {
        trace_.truth.push_back({0.0, cfg_.initial_count()});
        for (const auto& cp : cfg_.change_points)
            if (cp.time_s < cfg_.duration_s) trace_.truth.push_back({cp.time_s, cp.new_ap_count});
    }

    void set_active_count(int count, double now) {
        for (std::size_t i = 0; i < stations_.size(); ++i) {
            auto& s = stations_[i];
            const bool want = static_cast<int>(i) < count;
            if (want && !s.st.active) {
                s.st.active = true;
                s.st.stage = 0;
                s.st.extra_retry_used = false;
                s.st.counter = draw_backoff(0, dcf_.cw_min, s.backoff_rng, dcf_.max_stage);
                s.st.beacon_pending = false;
                s.st.next_beacon_due =
                    now + s.phase_rng.next_double() * dcf_.beacon_interval_s;
            } else if (!want && s.st.active) {
                s.st.active = false;
                s.st.beacon_pending = false;
            }
        }
    }

    void run_mac() {
        const double T = period_s();
        const double on = on_len();
        std::size_t next_change = 1;  // index into trace_.truth
        for (std::size_t n = 0;; ++n) {
            const double period_start = static_cast<double>(n) * T;
            if (period_start >= cfg_.duration_s) break;
            trace_.stats.lteu_on_airtime_s +=
                std::max(0.0, std::min(period_start + on, cfg_.duration_s) - period_start);
            double s = period_start + on;
            const double e = std::min(period_start + T, cfg_.duration_s);
            while (s < e) {
                // apply any state changes due before this stretch
                while (next_change < trace_.truth.size() && trace_.truth[next_change].t <= s) {
                    set_active_count(trace_.truth[next_change].ap_count,
                                     trace_.truth[next_change].t);
                    ++next_change;
                }
                double stop = e;
                if (next_change < trace_.truth.size() && trace_.truth[next_change].t < e)
                    stop = std::max(s, trace_.truth[next_change].t);
                if (stop > s) process_off_window(s, stop);
                if (stop == s) {  // change point exactly at window start edge
                    set_active_count(trace_.truth[next_change].ap_count,
                                     trace_.truth[next_change].t);
                    ++next_change;
                }
                s = stop;
            }
        }
    }

    void pend_due_beacons(double now) {
        for (auto& s : stations_) {
            if (!s.st.active) continue;
            bool newly_pending = false;
            while (s.st.next_beacon_due <= now) {
                // an undelivered previous beacon is superseded
                newly_pending = !s.st.beacon_pending;
                s.st.beacon_pending = true;
                s.st.next_beacon_due += dcf_.beacon_interval_s;
            }
            // management frames access through a fresh minimum-window draw
            // instead of inheriting the data frame's retry chain
            if (newly_pending)
                s.st.counter = std::min(
                    s.st.counter, draw_backoff(0, dcf_.cw_min, s.backoff_rng, dcf_.max_stage));
        }
    }

    double frame_airtime(const Station& s) const {
        if (s.st.beacon_pending) return cfg_.tuning.beacon_airtime_s;
        const double mult =
            1.0 + (kApAirtimePattern[s.st.bssid - 1] - 1.0) * cfg_.tuning.airtime_spread;
        return cfg_.tuning.data_airtime_s * mult;
    }

    void log_tx(const Station& s, double start, double airtime) {
        const double p = s.st.rx_power_dbm + fading_rng_.normal(0.0, cfg_.tuning.frame_fading_db);
        log_.push_back({start, start + airtime, dbm_to_mw(p)});
    }

    void advance_beb(Station& s) {
        if (s.st.beacon_pending) {
            // collided beacon: retry promptly at the minimum window without
            // touching the data retry chain
            s.st.counter = draw_backoff(0, dcf_.cw_min, s.backoff_rng, dcf_.max_stage);
            return;
        }
        if (s.st.stage < dcf_.max_stage) {
            ++s.st.stage;
        } else if (!s.st.extra_retry_used) {
            s.st.extra_retry_used = true;  // one more attempt at W_m
        } else {
            // retry limit exhausted: drop the frame, start over
            s.st.stage = 0;
            s.st.extra_retry_used = false;
        }
        s.st.counter = draw_backoff(s.st.stage, dcf_.cw_min, s.backoff_rng, dcf_.max_stage);
    }

    void process_off_window(double S, double E) {
        double t = S;
        for (;;) {
            bool any_active = false;
            for (const auto& s : stations_)
                if (s.st.active) any_active = true;
            if (!any_active) return;

            pend_due_beacons(t);

            const double idle_start = t + dcf_.difs_s;
            if (idle_start >= E) return;  // idle shorter than DIFS: counters frozen

            std::uint64_t cmin = UINT64_MAX;
            for (const auto& s : stations_)
                if (s.st.active) cmin = std::min(cmin, s.st.counter);

            const double tx_at = idle_start + static_cast<double>(cmin) * dcf_.slot_s;
            if (tx_at >= E) {
                const auto elapsed =
                    static_cast<std::uint64_t>((E - idle_start) / dcf_.slot_s);
                for (auto& s : stations_)
                    if (s.st.active) s.st.counter -= std::min(elapsed, s.st.counter);
                return;
            }

            std::vector<Station*> winners;
            for (auto& s : stations_)
                if (s.st.active && s.st.counter == cmin) winners.push_back(&s);

            double busy_len = 0.0;
            for (const Station* w : winners) busy_len = std::max(busy_len, frame_airtime(*w));

            if (tx_at + busy_len > E) {
                // frame would straddle the LTE-U ON edge; hold until next OFF
                for (auto& s : stations_)
                    if (s.st.active) s.st.counter -= cmin;
                return;
            }

            for (auto& s : stations_)
                if (s.st.active && s.st.counter > cmin) s.st.counter -= cmin;

            if (winners.size() == 1) {
                Station& w = *winners.front();
                const double airtime = frame_airtime(w);
                log_tx(w, tx_at, airtime);
                if (w.st.beacon_pending) {
                    trace_.beacons.push_back({tx_at + airtime, w.st.bssid});
                    w.st.beacon_pending = false;
                    // data retry state survives the management interlude
                    w.st.counter =
                        draw_backoff(w.st.stage, dcf_.cw_min, w.backoff_rng, dcf_.max_stage);
                } else {
                    ++trace_.stats.wifi_tx;
                    w.st.stage = 0;
                    w.st.extra_retry_used = false;
                    w.st.counter = draw_backoff(0, dcf_.cw_min, w.backoff_rng, dcf_.max_stage);
                }
            } else {
                ++trace_.stats.wifi_collisions;
                for (Station* w : winners) log_tx(*w, tx_at, frame_airtime(*w));
                for (Station* w : winners) advance_beb(*w);
            }
            t = tx_at + busy_len;
        }
    }

    // OFF airtime elapsed before t; the measurement windows live on this
    // axis, so a window always spans listening time even when it reaches
    // back across an ON burst.
    double off_airtime_before(double t) const {
        const double T = period_s();
        const double on = on_len();
        const double n = std::floor(t / T);
        const double u = t - n * T;
        return n * (T - on) + std::max(0.0, u - on);
    }

    void sample_energy_pass() {
        const double T = period_s();
        const double on = on_len();
        const double delta = 1.0 / cfg_.sample_rate_hz;
        const double win =
            cfg_.tuning.energy_window_s > 0.0 ? cfg_.tuning.energy_window_s : delta;
        const double noise_mw = dbm_to_mw(cfg_.path_loss.noise_floor_dbm);
        const double max_air = std::max(cfg_.tuning.data_airtime_s, cfg_.tuning.beacon_airtime_s);

        // transmissions never overlap ON periods, so mapping endpoints is
        // exact
        std::vector<Transmission> vlog(log_.size());
        for (std::size_t i = 0; i < log_.size(); ++i)
            vlog[i] = {off_airtime_before(log_[i].start), off_airtime_before(log_[i].end),
                       log_[i].power_mw};

        std::size_t lo = 0;
        for (std::size_t n = 1;; ++n) {
            const double t = static_cast<double>(n) * delta;
            if (t > cfg_.duration_s) break;
            const double u = t - std::floor(t / T) * T;
            if (u < on) continue;  // ON: the BS cannot observe
            const double vt = off_airtime_before(t);
            const double w0 = std::max(0.0, vt - win);
            const double weff = vt - w0;
            if (weff <= 0.0) {
                trace_.energy.push_back({t, cfg_.path_loss.noise_floor_dbm});
                continue;
            }
            while (lo < vlog.size() && vlog[lo].start < w0 - max_air) ++lo;
            double sum_mw = 0.0;
            for (std::size_t i = lo; i < vlog.size() && vlog[i].start < vt; ++i) {
                const double ov = std::min(vlog[i].end, vt) - std::max(vlog[i].start, w0);
                if (ov > 0.0) sum_mw += vlog[i].power_mw * (ov / weff);
            }
            const double dbm =
                sum_mw == 0.0 ? cfg_.path_loss.noise_floor_dbm : mw_to_dbm(noise_mw + sum_mw);
            trace_.energy.push_back({t, dbm});
        }
    }

    // The correlator reports one value per sensing tick: high when its
    // capture window overlaps a detected preamble, noise otherwise. Detected
    // preambles form a per-AP Poisson process while that AP is active.
    void sample_ac_pass() {
        const double T = period_s();
        const double on = on_len();
        const double delta = 1.0 / cfg_.sample_rate_hz;
        const double cap = cfg_.tuning.ac_capture_s > 0.0 ? cfg_.tuning.ac_capture_s : delta;
        const Rng root(cfg_.seed);

        std::vector<double> events;
        for (std::size_t i = 0; i < stations_.size(); ++i) {
            Rng r = root.fork(200 + i);
            double t = 0.0;
            for (;;) {
                t += r.exponential(cfg_.tuning.ac_preamble_rate_hz);
                if (t >= cfg_.duration_s) break;
                const double u = t - std::floor(t / T) * T;
                if (u < on) continue;  // silent while LTE-U transmits
                if (trace_.truth_at(t) > static_cast<int>(i)) events.push_back(t);
            }
        }
        std::sort(events.begin(), events.end());

        std::vector<double> vevents(events.size());
        for (std::size_t i = 0; i < events.size(); ++i)
            vevents[i] = off_airtime_before(events[i]);

        std::size_t lo = 0;
        for (std::size_t n = 1;; ++n) {
            const double t = static_cast<double>(n) * delta;
            if (t > cfg_.duration_s) break;
            const double u = t - std::floor(t / T) * T;
            if (u < on) continue;
            const double vt = off_airtime_before(t);
            const double w0 = std::max(0.0, vt - cap);
            while (lo < vevents.size() && vevents[lo] < w0) ++lo;
            const bool hit = lo < vevents.size() && vevents[lo] <= vt;
            const double rho =
                hit ? rho_rng_.uniform(0.8, 1.0) : rho_rng_.uniform(0.0, 0.15);
            trace_.ac.push_back({t, rho});
        }
    }

    ScenarioConfig cfg_;
    DcfParams dcf_;
    std::vector<Station> stations_;
    Rng fading_rng_;
    Rng rho_rng_;
    std::vector<Transmission> log_;
    SimTrace trace_;
};

}  // namespace

SimTrace simulate_scenario(const ScenarioConfig& cfg) { return Simulator(cfg).run(); }

}  // namespace coexlab::sim

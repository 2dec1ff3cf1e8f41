#include "coexlab/sim/scenario.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace coexlab::sim {

const char* to_string(Sight s) { return s == Sight::Los ? "LOS" : "NLOS"; }

Sight sight_from_string(const std::string& s) {
    if (s == "LOS" || s == "los") return Sight::Los;
    if (s == "NLOS" || s == "nlos") return Sight::Nlos;
    throw std::invalid_argument("bad sight value: " + s);
}

void ScenarioConfig::validate() const {
    if (ap_list.size() > 5) throw std::invalid_argument("scenario: more than 5 APs");
    if (!(lteu.duty_cycle > 0.0 && lteu.duty_cycle <= 1.0))
        throw std::invalid_argument("scenario: duty_cycle outside (0,1]");
    if (!(lteu.period_ms > 0.0)) throw std::invalid_argument("scenario: period_ms <= 0");
    if (!(duration_s > 0.0)) throw std::invalid_argument("scenario: duration_s <= 0");
    if (!(sample_rate_hz > 0.0)) throw std::invalid_argument("scenario: sample_rate_hz <= 0");
    for (const auto& ap : ap_list)
        if (!(ap.distance_feet > 0.0)) throw std::invalid_argument("scenario: distance <= 0");
    if (initial_ap_count > static_cast<int>(ap_list.size()))
        throw std::invalid_argument("scenario: initial_ap_count exceeds ap_list");
    double last = 0.0;
    for (const auto& cp : change_points) {
        if (cp.time_s <= last)
            throw std::invalid_argument("scenario: change_points not strictly increasing");
        if (cp.new_ap_count < 0 || cp.new_ap_count > static_cast<int>(ap_list.size()))
            throw std::invalid_argument("scenario: change_point count outside ap_list");
        last = cp.time_s;
    }
}

namespace {

double parse_double(const std::string& v, const std::string& key) {
    try {
        std::size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing characters");
        return d;
    } catch (const std::exception&) {
        throw std::invalid_argument("scenario: bad number for " + key + ": " + v);
    }
}

}  // namespace

ScenarioConfig parse_scenario(const std::string& text) {
    ScenarioConfig cfg;
    cfg.ap_list.clear();
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        while (!line.empty() && (line.back() == ' ' || line.back() == '\r' || line.back() == '\t'))
            line.pop_back();
        std::size_t start = line.find_first_not_of(" \t");
        if (start == std::string::npos) continue;
        const auto eq = line.find('=', start);
        if (eq == std::string::npos)
            throw std::invalid_argument("scenario line " + std::to_string(line_no) +
                                        ": expected key=value");
        std::string key = line.substr(start, eq - start);
        while (!key.empty() && (key.back() == ' ' || key.back() == '\t')) key.pop_back();
        std::string value = line.substr(eq + 1);
        const auto vs = value.find_first_not_of(" \t");
        value = vs == std::string::npos ? std::string() : value.substr(vs);

        if (key == "ap") {
            // "ap = <distance_feet> <LOS|NLOS>"
            std::istringstream f(value);
            ApPlacement ap;
            std::string sight;
            if (!(f >> ap.distance_feet >> sight))
                throw std::invalid_argument("scenario line " + std::to_string(line_no) +
                                            ": ap wants '<feet> <LOS|NLOS>'");
            ap.sight = sight_from_string(sight);
            cfg.ap_list.push_back(ap);
        } else if (key == "change_point") {
            std::istringstream f(value);
            ChangePoint cp;
            if (!(f >> cp.time_s >> cp.new_ap_count))
                throw std::invalid_argument("scenario line " + std::to_string(line_no) +
                                            ": change_point wants '<time_s> <count>'");
            cfg.change_points.push_back(cp);
        } else if (key == "duty_cycle") {
            cfg.lteu.duty_cycle = parse_double(value, key);
        } else if (key == "period_ms") {
            cfg.lteu.period_ms = parse_double(value, key);
        } else if (key == "duration_s") {
            cfg.duration_s = parse_double(value, key);
        } else if (key == "sample_rate_hz") {
            cfg.sample_rate_hz = parse_double(value, key);
        } else if (key == "seed") {
            cfg.seed = static_cast<std::uint64_t>(std::stoull(value));
        } else if (key == "initial_ap_count") {
            cfg.initial_ap_count = static_cast<int>(parse_double(value, key));
        } else if (key == "ref_loss_db") {
            cfg.path_loss.ref_loss_db = parse_double(value, key);
        } else if (key == "exponent_los") {
            cfg.path_loss.exponent_los = parse_double(value, key);
        } else if (key == "exponent_nlos") {
            cfg.path_loss.exponent_nlos = parse_double(value, key);
        } else if (key == "wall_penalty_db") {
            cfg.path_loss.wall_penalty_db = parse_double(value, key);
        } else if (key == "shadow_sigma_db") {
            cfg.path_loss.shadow_sigma_db = parse_double(value, key);
        } else if (key == "tx_power_dbm") {
            cfg.path_loss.tx_power_dbm = parse_double(value, key);
        } else if (key == "noise_floor_dbm") {
            cfg.path_loss.noise_floor_dbm = parse_double(value, key);
        } else if (key == "frame_fading_db") {
            cfg.tuning.frame_fading_db = parse_double(value, key);
        } else if (key == "data_airtime_s") {
            cfg.tuning.data_airtime_s = parse_double(value, key);
        } else if (key == "beacon_airtime_s") {
            cfg.tuning.beacon_airtime_s = parse_double(value, key);
        } else if (key == "ap_offset_scale_db") {
            cfg.tuning.ap_offset_scale_db = parse_double(value, key);
        } else if (key == "ac_preamble_rate_hz") {
            cfg.tuning.ac_preamble_rate_hz = parse_double(value, key);
        } else if (key == "ac_capture_s") {
            cfg.tuning.ac_capture_s = parse_double(value, key);
        } else if (key == "energy_window_s") {
            cfg.tuning.energy_window_s = parse_double(value, key);
        } else {
            throw std::invalid_argument("scenario line " + std::to_string(line_no) +
                                        ": unknown key '" + key + "'");
        }
    }
    cfg.validate();
    return cfg;
}

ScenarioConfig load_scenario(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open scenario: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

void save_scenario(const ScenarioConfig& cfg, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << "duty_cycle = " << cfg.lteu.duty_cycle << "\n";
    out << "period_ms = " << cfg.lteu.period_ms << "\n";
    out << "duration_s = " << cfg.duration_s << "\n";
    out << "sample_rate_hz = " << cfg.sample_rate_hz << "\n";
    out << "seed = " << cfg.seed << "\n";
    if (cfg.initial_ap_count >= 0) out << "initial_ap_count = " << cfg.initial_ap_count << "\n";
    for (const auto& ap : cfg.ap_list)
        out << "ap = " << ap.distance_feet << " " << to_string(ap.sight) << "\n";
    for (const auto& cp : cfg.change_points)
        out << "change_point = " << cp.time_s << " " << cp.new_ap_count << "\n";
    const PathLossParams d;
    if (cfg.path_loss.ref_loss_db != d.ref_loss_db)
        out << "ref_loss_db = " << cfg.path_loss.ref_loss_db << "\n";
    if (cfg.path_loss.exponent_los != d.exponent_los)
        out << "exponent_los = " << cfg.path_loss.exponent_los << "\n";
    if (cfg.path_loss.exponent_nlos != d.exponent_nlos)
        out << "exponent_nlos = " << cfg.path_loss.exponent_nlos << "\n";
    if (cfg.path_loss.wall_penalty_db != d.wall_penalty_db)
        out << "wall_penalty_db = " << cfg.path_loss.wall_penalty_db << "\n";
    if (cfg.path_loss.shadow_sigma_db != d.shadow_sigma_db)
        out << "shadow_sigma_db = " << cfg.path_loss.shadow_sigma_db << "\n";
    if (cfg.path_loss.tx_power_dbm != d.tx_power_dbm)
        out << "tx_power_dbm = " << cfg.path_loss.tx_power_dbm << "\n";
    if (cfg.path_loss.noise_floor_dbm != d.noise_floor_dbm)
        out << "noise_floor_dbm = " << cfg.path_loss.noise_floor_dbm << "\n";
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace coexlab::sim

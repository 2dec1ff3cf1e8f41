#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "coexlab/sim/trace.hpp"

namespace coexlab::sim {
namespace {

void append_double(std::string& out, double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    out.append(buf, res.ptr);
}

void write_file(const std::string& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out.write(body.data(), static_cast<std::streamsize>(body.size()));
    if (!out) throw std::runtime_error("write failed: " + path);
}

std::vector<std::string> read_lines(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(line);
    }
    return lines;
}

double parse_field(const std::string& path, std::size_t line_no, const char*& p,
                   const char* end) {
    double v = 0.0;
    const auto res = std::from_chars(p, end, v);
    if (res.ec != std::errc())
        throw std::runtime_error(path + ":" + std::to_string(line_no) + ": bad number");
    p = res.ptr;
    return v;
}

}  // namespace

int SimTrace::truth_at(double t) const {
    int count = 0;
    for (const auto& p : truth) {
        if (p.t > t) break;
        count = p.ap_count;
    }
    return count;
}

std::vector<double> energy_values(const SimTrace& trace) {
    std::vector<double> v;
    v.reserve(trace.energy.size());
    for (const auto& s : trace.energy) v.push_back(s.dbm);
    return v;
}

void write_trace(const SimTrace& trace, const std::string& dir) {
    std::filesystem::create_directories(dir);
    std::string body = "t_s,dbm\n";
    for (const auto& s : trace.energy) {
        append_double(body, s.t);
        body.push_back(',');
        append_double(body, s.dbm);
        body.push_back('\n');
    }
    write_file(dir + "/energy.csv", body);

    body = "t_s,rho\n";
    for (const auto& s : trace.ac) {
        append_double(body, s.t);
        body.push_back(',');
        append_double(body, s.rho);
        body.push_back('\n');
    }
    write_file(dir + "/ac.csv", body);

    body = "t_s,bssid\n";
    for (const auto& b : trace.beacons) {
        append_double(body, b.t);
        body.push_back(',');
        body += std::to_string(b.bssid);
        body.push_back('\n');
    }
    write_file(dir + "/beacons.csv", body);

    body = "t_s,ap_count\n";
    for (const auto& p : trace.truth) {
        append_double(body, p.t);
        body.push_back(',');
        body += std::to_string(p.ap_count);
        body.push_back('\n');
    }
    write_file(dir + "/truth.csv", body);

    body.clear();
    body += "wifi_tx = " + std::to_string(trace.stats.wifi_tx) + "\n";
    body += "wifi_collisions = " + std::to_string(trace.stats.wifi_collisions) + "\n";
    body += "lteu_on_airtime_s = ";
    append_double(body, trace.stats.lteu_on_airtime_s);
    body.push_back('\n');
    write_file(dir + "/stats.txt", body);
}

SimTrace read_trace(const std::string& dir) {
    SimTrace trace;
    auto parse_csv = [&](const std::string& name, const char* header, auto&& push) {
        const std::string path = dir + "/" + name;
        const auto lines = read_lines(path);
        if (lines.empty() || lines[0] != header)
            throw std::runtime_error(path + ": missing header '" + header + "'");
        for (std::size_t i = 1; i < lines.size(); ++i) {
            if (lines[i].empty()) continue;
            const char* p = lines[i].data();
            const char* end = p + lines[i].size();
            const double a = parse_field(path, i + 1, p, end);
            if (p == end || *p != ',')
                throw std::runtime_error(path + ":" + std::to_string(i + 1) + ": expected comma");
            ++p;
            const double b = parse_field(path, i + 1, p, end);
            push(a, b);
        }
    };
    parse_csv("energy.csv", "t_s,dbm",
              [&](double t, double v) { trace.energy.push_back({t, v}); });
    parse_csv("ac.csv", "t_s,rho", [&](double t, double v) { trace.ac.push_back({t, v}); });
    parse_csv("beacons.csv", "t_s,bssid",
              [&](double t, double v) { trace.beacons.push_back({t, static_cast<int>(v)}); });
    parse_csv("truth.csv", "t_s,ap_count",
              [&](double t, double v) { trace.truth.push_back({t, static_cast<int>(v)}); });
    return trace;
}

}  // namespace coexlab::sim

#include "coexlab/data/dataset_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <system_error>

namespace coexlab::data {
namespace {

void append_double(std::string& out, double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    out.append(buf, res.ptr);
}

[[noreturn]] void parse_fail(const std::string& path, std::size_t line_no, const char* what) {
    throw std::runtime_error(path + ":" + std::to_string(line_no) + ": " + what);
}

}  // namespace

void write_dataset(const std::vector<LabeledChunk>& chunks, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    std::string line;
    for (const auto& c : chunks) {
        line.clear();
        line += std::to_string(c.label);
        for (double v : c.values) {
            line.push_back('\t');
            append_double(line, v);
        }
        line.push_back('\n');
        out.write(line.data(), static_cast<std::streamsize>(line.size()));
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

std::vector<LabeledChunk> read_dataset(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    std::vector<LabeledChunk> chunks;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        LabeledChunk c;
        const char* p = line.data();
        const char* end = line.data() + line.size();
        auto lab = std::from_chars(p, end, c.label);
        if (lab.ec != std::errc()) parse_fail(path, line_no, "bad label");
        p = lab.ptr;
        while (p != end) {
            if (*p != '\t') parse_fail(path, line_no, "expected tab separator");
            ++p;
            double v = 0.0;
            auto res = std::from_chars(p, end, v);
            if (res.ec != std::errc()) parse_fail(path, line_no, "bad value");
            p = res.ptr;
            c.values.push_back(v);
        }
        chunks.push_back(std::move(c));
    }
    return chunks;
}

}  // namespace coexlab::data

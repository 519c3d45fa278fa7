#include "sfcgame/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#ifndef SFCGAME_VERSION
#define SFCGAME_VERSION "0.0.0"
#endif

namespace sfcgame::cli {

std::string version_string() { return SFCGAME_VERSION; }

std::string format_number(double v) {
    if (v == 0.0) v = 0.0;  // normalize -0
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

CsvWriter::CsvWriter(std::string path, std::uint64_t seed)
    : path_(std::move(path)) {
    buf_ = "# seed=" + std::to_string(seed) + " version=" + version_string() +
           "\n";
}

void CsvWriter::header(const std::vector<std::string>& columns) {
    row(columns);
}

void CsvWriter::row(const std::vector<std::string>& cells) {
    for (size_t i = 0; i < cells.size(); ++i) {
        if (i) buf_ += ',';
        buf_ += cells[i];
    }
    buf_ += '\n';
}

const std::string& CsvWriter::flush() {
    std::ofstream out(path_, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path_);
    out << buf_;
    out.close();
    if (!out) throw std::runtime_error("write failed for " + path_);
    return buf_;
}

}  // namespace sfcgame::cli

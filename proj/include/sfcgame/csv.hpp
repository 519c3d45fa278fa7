#pragma once

#include <cstdint>
#include <string>
#include <vector>

// CSV emission: comma separators, '.' decimal point, LF line endings, at most
// six decimal places per number (IEEE round-to-nearest-even), and a first
// line of the form `# seed=<n> version=<semver>`.

namespace sfcgame::cli {

std::string format_number(double v);

class CsvWriter {
public:
    CsvWriter(std::string path, std::uint64_t seed);

    void header(const std::vector<std::string>& columns);
    void row(const std::vector<std::string>& cells);

    // Writes the accumulated bytes to disk. Returns the content.
    const std::string& flush();
    const std::string& content() const { return buf_; }

private:
    std::string path_;
    std::string buf_;
};

std::string version_string();

}  // namespace sfcgame::cli

#pragma once

// CSV output with canonical number formatting: every double is written as
// its shortest decimal that round-trips, so re-reading and re-serializing a
// file is byte-identical and digests are reproducible.

#include <string>
#include <vector>

namespace ndsg {

// Shortest round-trip decimal representation (std::to_chars).
std::string format_double(double v);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    void add_row(const std::vector<double>& values);
    std::string serialize() const;      // header line + rows, '\n' endings
};

CsvTable parse_csv(const std::string& text);

void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

}  // namespace ndsg

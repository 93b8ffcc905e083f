#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace dqca::io {

// Shortest round-trip decimal form (to_chars); reruns are byte-identical.
std::string format_double(double v);
std::string format_complex(std::complex<double> v);

using Cell = std::variant<double, std::int64_t, std::string>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void add_row(std::vector<Cell> row);
};

std::string to_csv(const Table& table);
std::string to_json(const Table& table);  // array of row objects

void write_file(const std::string& path, const std::string& contents);

} // namespace dqca::io

#pragma once

#include <map>
#include <string>
#include <vector>

#include "finex/error.hpp"

namespace finex {

/// One parsed CSV file: header row plus data rows, with the originating line
/// number of each row (1-based, header is line 1) kept for error messages.
struct CsvTable {
    std::string path;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::size_t> line_numbers;

    std::size_t column(const std::string& name) const;        // throws SchemaViolation
    bool has_column(const std::string& name) const;
    const std::string& at(std::size_t row, std::size_t col) const;
};

/// Strict RFC-4180-style reader: quoted fields, embedded commas/newlines,
/// CRLF tolerated. Every row must match the header width.
CsvTable read_csv(const std::string& path);

/// Serialize one row, quoting only where needed; rows end with '\n'.
std::string csv_row(const std::vector<std::string>& fields);

/// Fixed-format doubles for stable output: 4 decimals by default,
/// or %.17g when full precision is requested. Negative zero is normalized.
std::string format_double(double v, bool full_precision);

/// Integer-valued field (ranks, classes, counts).
std::string format_int(long long v);

double parse_double(const CsvTable& t, std::size_t row, std::size_t col);
long long parse_int(const CsvTable& t, std::size_t row, std::size_t col);

} // namespace finex

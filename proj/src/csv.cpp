#include "finex/csv.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace finex {

std::size_t CsvTable::column(const std::string& name) const {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) {
        fail(Errc::SchemaViolation, path + ": missing required column '" + name + "'");
    }
    return static_cast<std::size_t>(it - header.begin());
}

bool CsvTable::has_column(const std::string& name) const {
    return std::find(header.begin(), header.end(), name) != header.end();
}

const std::string& CsvTable::at(std::size_t row, std::size_t col) const {
    return rows[row][col];
}

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        fail(Errc::IoFailure, "cannot open '" + path + "'");
    }
    std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

    CsvTable table;
    table.path = path;

    std::vector<std::string> record;
    std::string field;
    bool quoted = false;
    std::size_t line = 1;
    std::size_t record_line = 1;

    auto end_field = [&]() {
        record.push_back(field);
        field.clear();
    };
    auto end_record = [&]() {
        end_field();
        if (table.header.empty()) {
            table.header = record;
        } else {
            if (record.size() != table.header.size()) {
                fail(Errc::SchemaViolation, path + ":" + std::to_string(record_line) +
                                                ": expected " + std::to_string(table.header.size()) +
                                                " fields, got " + std::to_string(record.size()));
            }
            table.rows.push_back(record);
            table.line_numbers.push_back(record_line);
        }
        record.clear();
        record_line = line;
    };

    for (std::size_t i = 0; i < content.size(); ++i) {
        const char c = content[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < content.size() && content[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                if (c == '\n') ++line;
                field.push_back(c);
            }
            continue;
        }
        switch (c) {
            case '"':
                quoted = true;
                break;
            case ',':
                end_field();
                break;
            case '\r':
                break;
            case '\n':
                ++line;
                end_record();
                break;
            default:
                field.push_back(c);
        }
    }
    if (quoted) {
        fail(Errc::SchemaViolation, path + ": unterminated quoted field");
    }
    if (!field.empty() || !record.empty()) {
        end_record(); // final record without trailing newline
    }
    if (table.header.empty()) {
        fail(Errc::SchemaViolation, path + ": empty file");
    }
    return table;
}

std::string csv_row(const std::vector<std::string>& fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        const std::string& f = fields[i];
        const bool needs_quotes = f.find_first_of(",\"\n\r") != std::string::npos;
        if (i) out.push_back(',');
        if (needs_quotes) {
            out.push_back('"');
            for (const char c : f) {
                if (c == '"') out.push_back('"');
                out.push_back(c);
            }
            out.push_back('"');
        } else {
            out += f;
        }
    }
    out.push_back('\n');
    return out;
}

std::string format_double(double v, bool full_precision) {
    if (v == 0.0) v = 0.0; // fold -0.0
    char buf[64];
    if (full_precision) {
        std::snprintf(buf, sizeof(buf), "%.17g", v);
    } else {
        std::snprintf(buf, sizeof(buf), "%.4f", v);
        if (std::strtod(buf, nullptr) == 0.0 && buf[0] == '-') {
            std::snprintf(buf, sizeof(buf), "%.4f", 0.0); // rounded to -0.0000
        }
    }
    return buf;
}

std::string format_int(long long v) {
    return std::to_string(v);
}

double parse_double(const CsvTable& t, std::size_t row, std::size_t col) {
    const std::string& s = t.rows[row][col];
    if (s.empty()) {
        fail(Errc::MissingValue, t.path + ":" + std::to_string(t.line_numbers[row]) +
                                     ": empty value in column '" + t.header[col] + "'");
    }
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (errno != 0 || end != s.c_str() + s.size() || !std::isfinite(v)) {
        fail(Errc::SchemaViolation, t.path + ":" + std::to_string(t.line_numbers[row]) +
                                        ": invalid number '" + s + "' in column '" + t.header[col] + "'");
    }
    return v;
}

long long parse_int(const CsvTable& t, std::size_t row, std::size_t col) {
    const std::string& s = t.rows[row][col];
    if (s.empty()) {
        fail(Errc::MissingValue, t.path + ":" + std::to_string(t.line_numbers[row]) +
                                     ": empty value in column '" + t.header[col] + "'");
    }
    errno = 0;
    char* end = nullptr;
    const long long v = std::strtoll(s.c_str(), &end, 10);
    if (errno != 0 || end != s.c_str() + s.size()) {
        fail(Errc::SchemaViolation, t.path + ":" + std::to_string(t.line_numbers[row]) +
                                        ": invalid integer '" + s + "' in column '" + t.header[col] + "'");
    }
    return v;
}

} // namespace finex

#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace volcast {

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    // 1-based line number of each row in the source file, for error reports.
    std::vector<std::size_t> line_numbers;
};

// Reads a comma-separated file with a header row. Fields are not quoted in
// any of the formats this tool consumes.
CsvTable read_csv(const std::string& path);

// Index of a named header column; throws data_error when absent.
std::size_t column_index(const CsvTable& table, const std::string& name);

double parse_double(const std::string& text, const std::string& what,
                    std::size_t line_no);

// Shortest decimal representation that round-trips to the same double.
std::string format_double(double v);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace volcast

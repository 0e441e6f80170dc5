#include "volcast/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "volcast/errors.hpp"

namespace volcast {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = line.find(',', start);
        if (pos == std::string::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw data_error("cannot open file: " + path);
    CsvTable table;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto fields = split_fields(line);
        for (auto& f : fields) f = trim(f);
        if (table.header.empty()) {
            table.header = std::move(fields);
        } else {
            table.rows.push_back(std::move(fields));
            table.line_numbers.push_back(line_no);
        }
    }
    if (table.header.empty()) throw data_error("empty file: " + path);
    return table;
}

std::size_t column_index(const CsvTable& table, const std::string& name) {
    for (std::size_t i = 0; i < table.header.size(); ++i)
        if (table.header[i] == name) return i;
    throw data_error("missing column '" + name + "'");
}

double parse_double(const std::string& text, const std::string& what,
                    std::size_t line_no) {
    double value = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last)
        throw data_error("malformed " + what + " '" + text + "' at line " +
                         std::to_string(line_no));
    return value;
}

std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw data_error("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw data_error("cannot write file: " + path);
    out << content;
}

}  // namespace volcast

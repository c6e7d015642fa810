#include "srp/csv.hpp"

#include <fstream>
#include <ostream>
#include <stdexcept>

#include <fmt/format.h>

namespace srp {

std::string format_number(double value) { return fmt::format("{:.17g}", value); }

void write_csv(std::ostream& out, const CsvTable& table) {
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
        if (c) out << ',';
        out << table.columns[c];
    }
    out << '\n';
    for (const auto& row : table.rows) {
        if (row.size() != table.columns.size()) throw std::logic_error("write_csv: row width does not match header");
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out << ',';
            out << format_number(row[c]);
        }
        out << '\n';
    }
}

void write_csv_file(const std::filesystem::path& path, const CsvTable& table) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    write_csv(out, table);
    if (!out) throw std::runtime_error("failed writing " + path.string());
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string current;
    auto flush = [&] {
        const auto first = current.find_first_not_of(" \t\r");
        const auto last = current.find_last_not_of(" \t\r");
        fields.push_back(first == std::string::npos ? std::string() : current.substr(first, last - first + 1));
        current.clear();
    };
    for (char ch : line) {
        if (ch == ',') {
            flush();
        } else {
            current += ch;
        }
    }
    flush();
    return fields;
}

}  // namespace srp

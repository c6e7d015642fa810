#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace srp {

/// Numeric table with a header row. Values print with 17 significant
/// digits so output round-trips and is byte-stable across runs.
struct CsvTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

std::string format_number(double value);

void write_csv(std::ostream& out, const CsvTable& table);
void write_csv_file(const std::filesystem::path& path, const CsvTable& table);

/// Splits one CSV line on commas, trimming surrounding whitespace.
std::vector<std::string> split_csv_line(const std::string& line);

}  // namespace srp

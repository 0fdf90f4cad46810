#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

namespace rffmd {

/// Formats a double with 17 significant digits (round-trips exactly).
std::string format_exact(double x);

/// Minimal CSV writer: header row, period decimal separator, LF line endings.
class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);

    CsvWriter& field(std::string_view s);
    CsvWriter& field(double x);
    CsvWriter& field(long long x);
    CsvWriter& field(int x) { return field(static_cast<long long>(x)); }
    CsvWriter& field(std::size_t x) { return field(static_cast<long long>(x)); }
    void end_row();

    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
    std::ofstream out_;
    std::size_t columns_;
    std::size_t current_ = 0;
};

/// Parsed CSV table with a header row; all cells kept as strings.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::size_t column(std::string_view name) const;
    double number(std::size_t row, std::string_view name) const;
};

CsvTable read_csv(const std::filesystem::path& path);

std::vector<std::string> split(std::string_view s, char sep);
std::string trim(std::string_view s);
double parse_double(std::string_view s);
long long parse_int(std::string_view s);

} // namespace rffmd

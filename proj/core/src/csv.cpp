#include "rffmd/csv.hpp"

#include <charconv>
#include <sstream>

#include <fmt/core.h>

#include "rffmd/errors.hpp"

namespace rffmd {

std::string format_exact(double x) { return fmt::format("{:.17g}", x); }

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
    : path_(path), out_(path, std::ios::binary), columns_(header.size()) {
    if (!out_) throw Error("cannot open " + path.string() + " for writing");
    for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
    out_ << '\n';
}

CsvWriter& CsvWriter::field(std::string_view s) {
    if (current_ > 0) out_ << ',';
    out_ << s;
    ++current_;
    return *this;
}

CsvWriter& CsvWriter::field(double x) { return field(std::string_view(format_exact(x))); }

CsvWriter& CsvWriter::field(long long x) { return field(std::string_view(std::to_string(x))); }

void CsvWriter::end_row() {
    if (current_ != columns_)
        throw Error(fmt::format("{}: row has {} fields, header has {}", path_.string(), current_,
                                columns_));
    out_ << '\n';
    current_ = 0;
    if (!out_) throw Error("write failed: " + path_.string());
}

std::size_t CsvTable::column(std::string_view name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return i;
    throw ParseError("missing column '" + std::string(name) + "'");
}

double CsvTable::number(std::size_t row, std::string_view name) const {
    return parse_double(rows.at(row).at(column(name)));
}

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        const std::size_t pos = s.find(sep, start);
        if (pos == std::string_view::npos) {
            out.emplace_back(s.substr(start));
            return out;
        }
        out.emplace_back(s.substr(start, pos - start));
        start = pos + 1;
    }
}

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

double parse_double(std::string_view s) {
    const std::string t = trim(s);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
        throw ParseError("not a number: '" + t + "'");
    return v;
}

long long parse_int(std::string_view s) {
    const std::string t = trim(s);
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec == std::errc() && ptr == t.data() + t.size() && !t.empty()) return v;
    // Accept integral values written in floating notation, e.g. 1e4.
    const double d = parse_double(t);
    if (d != static_cast<double>(static_cast<long long>(d)))
        throw ParseError("not an integer: '" + t + "'");
    return static_cast<long long>(d);
}

CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path.string());
    CsvTable table;
    std::string line;
    if (!std::getline(in, line)) throw ParseError(path.string() + ": empty file");
    for (auto& h : split(line, ',')) table.header.push_back(trim(h));
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        auto cells = split(line, ',');
        if (cells.size() != table.header.size())
            throw ParseError(fmt::format("{}: row {} has {} fields, expected {}", path.string(),
                                         table.rows.size() + 2, cells.size(),
                                         table.header.size()));
        table.rows.push_back(std::move(cells));
    }
    return table;
}

} // namespace rffmd

#include "ssakit/io.hpp"

#include "ssakit/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <vector>

namespace ssakit {

namespace {

constexpr std::string_view kModule = "cli";

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        out.push_back(trim(line.substr(start, comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

[[noreturn]] void parse_error(std::size_t line, const std::string& what) {
    throw Error(ErrorCode::kParseError, kModule, "line " + std::to_string(line) + ": " + what);
}

template <class T>
bool parse_number(std::string_view s, T& out) {
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && ptr == s.data() + s.size();
}

}  // namespace

Date parse_date(std::string_view text) {
    int y = 0;
    unsigned m = 0, d = 0;
    if (text.size() != 10 || text[4] != '-' || text[7] != '-' ||
        !parse_number(text.substr(0, 4), y) || !parse_number(text.substr(5, 2), m) ||
        !parse_number(text.substr(8, 2), d)) {
        throw Error(ErrorCode::kParseError, kModule, "malformed date '" + std::string(text) + "'");
    }
    const Date date{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
    if (!date.ok()) {
        throw Error(ErrorCode::kParseError, kModule, "invalid date '" + std::string(text) + "'");
    }
    return date;
}

std::string format_date(const Date& date) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(date.year()),
                  static_cast<unsigned>(date.month()), static_cast<unsigned>(date.day()));
    return buf;
}

TimeSeries load_series(std::istream& in, const ColumnMap& columns) {
    std::string line;
    std::size_t line_no = 0;
    std::optional<std::size_t> date_col, value_col;
    std::size_t n_cols = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto header = split(line);
        n_cols = header.size();
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (header[i] == columns.date) date_col = i;
            if (header[i] == columns.value) value_col = i;
        }
        break;
    }
    if (n_cols == 0) throw Error(ErrorCode::kEmptyInput, kModule, "input has no header");
    if (!value_col) parse_error(line_no, "header lacks value column '" + columns.value + "'");

    std::vector<double> values;
    std::optional<Date> start, previous;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto fields = split(line);
        if (fields.size() != n_cols) {
            parse_error(line_no, "expected " + std::to_string(n_cols) + " fields, found " +
                                     std::to_string(fields.size()));
        }
        double v = 0.0;
        const auto text = fields[*value_col];
        if (!parse_number(text, v) || !std::isfinite(v)) {
            parse_error(line_no, "value '" + std::string(text) + "' is not a finite number");
        }
        if (date_col) {
            Date d{};
            try {
                d = parse_date(fields[*date_col]);
            } catch (const Error& e) {
                parse_error(line_no, e.what());
            }
            if (previous &&
                std::chrono::sys_days{d} != std::chrono::sys_days{*previous} + std::chrono::days{1}) {
                throw Error(ErrorCode::kGapError, kModule,
                            "line " + std::to_string(line_no) + ": " + format_date(d) +
                                " does not follow " + format_date(*previous));
            }
            if (!start) start = d;
            previous = d;
        }
        values.push_back(v);
    }
    if (values.empty()) throw Error(ErrorCode::kEmptyInput, kModule, "input has no data rows");
    return TimeSeries(std::move(values), start);
}

TimeSeries load_series(const std::filesystem::path& path, const ColumnMap& columns) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::kIoError, kModule, "cannot open " + path.string());
    TimeSeries s = load_series(in, columns);
    return TimeSeries(std::vector<double>(s.values().begin(), s.values().end()), s.start_date(),
                      path.stem().string());
}

}  // namespace ssakit

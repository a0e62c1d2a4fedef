#pragma once

#include "ssakit/series.hpp"

#include <filesystem>
#include <istream>
#include <string>

namespace ssakit {

struct ColumnMap {
    std::string date = "date";
    std::string value = "value";
};

/// Reads a headed CSV with an ISO-8601 day column and a decimal value column.
/// The date column may be absent, giving an undated series. Rows must be
/// consecutive days. Throws ParseError / GapError (with 1-based line numbers),
/// EmptyInput, or IoError.
TimeSeries load_series(const std::filesystem::path& path, const ColumnMap& columns = {});
TimeSeries load_series(std::istream& in, const ColumnMap& columns = {});

/// YYYY-MM-DD.
Date parse_date(std::string_view text);
std::string format_date(const Date& date);

}  // namespace ssakit

#pragma once

#include "ssakit/evaluation.hpp"

#include "json.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace ssakit {

inline constexpr std::string_view kVersion = "1.0.0";

enum class ReportFormat { kCsv, kJson };

/// 17 significant digits; "nan" / "inf" for non-finite values.
std::string format_number(double value);

/// One row per (method, grouping, horizon):
/// method,grouping,horizon,mean_abs,max_abs,mean_rel,max_rel,count,failures
void write_cells_csv(const std::vector<ErrorCell>& cells, std::ostream& out);
std::vector<ErrorCell> read_cells_csv(std::istream& in);

/// day,window,window_method,groupings,failures
void write_days_csv(const std::vector<DayRecord>& days, std::ostream& out);

nlohmann::json to_json(const ErrorReport& report);
ErrorReport report_from_json(const nlohmann::json& j);

/// M,horizon,mean_abs,max_abs,mean_rel,max_rel
void write_surface_csv(const SweepSurface& surface, std::ostream& out);
nlohmann::json to_json(const SweepSurface& surface);

/// Writes the report (CSV: metadata as leading '#' lines, per-day records in a
/// sibling "<stem>.days.csv"; JSON: everything in one document). Throws IoError.
void emit_report(const ErrorReport& report, ReportFormat format, const std::filesystem::path& path,
                 const nlohmann::json& metadata);
void emit_report(const SweepSurface& surface, ReportFormat format,
                 const std::filesystem::path& path, const nlohmann::json& metadata);

}  // namespace ssakit

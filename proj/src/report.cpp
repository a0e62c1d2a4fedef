#include "ssakit/report.hpp"

#include "ssakit/error.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace ssakit {

namespace {

constexpr std::string_view kModule = "cli";
constexpr const char* kCellHeader = "method,grouping,horizon,mean_abs,max_abs,mean_rel,max_rel,count,failures";

double parse_number(const std::string& s) {
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
}

nlohmann::json number_or_null(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(); }

double number_from(const nlohmann::json& j) {
    return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::kIoError, kModule, "cannot write " + path.string());
    return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
    out.flush();
    if (!out) throw Error(ErrorCode::kIoError, kModule, "failed writing " + path.string());
}

void write_metadata_lines(const nlohmann::json& metadata, std::ostream& out) {
    out << "# ssakit " << kVersion << '\n';
    for (const auto& [key, value] : metadata.items()) out << "# " << key << ": " << value.dump() << '\n';
}

std::filesystem::path days_path(const std::filesystem::path& path) {
    auto p = path;
    p.replace_filename(path.stem().string() + ".days.csv");
    return p;
}

nlohmann::json days_json(const std::vector<DayRecord>& days) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& d : days) {
        out.push_back({{"day", d.day},
                       {"window", d.window},
                       {"window_method", d.window_method},
                       {"groupings", d.groupings},
                       {"failures", d.failures}});
    }
    return out;
}

std::string join(const std::vector<std::string>& items, char sep) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += sep;
        out += items[i];
    }
    return out;
}

}  // namespace

std::string format_number(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

void write_cells_csv(const std::vector<ErrorCell>& cells, std::ostream& out) {
    out << kCellHeader << '\n';
    for (const auto& c : cells) {
        out << c.method << ',' << c.grouping << ',' << c.horizon << ',' << format_number(c.mean_abs)
            << ',' << format_number(c.max_abs) << ',' << format_number(c.mean_rel) << ','
            << format_number(c.max_rel) << ',' << c.count << ',' << c.failures << '\n';
    }
}

std::vector<ErrorCell> read_cells_csv(std::istream& in) {
    std::vector<ErrorCell> cells;
    std::string line;
    bool header = false;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        if (!header) {
            if (line != kCellHeader) {
                throw Error(ErrorCode::kParseError, kModule, "unexpected report header");
            }
            header = true;
            continue;
        }
        std::vector<std::string> f;
        std::stringstream ss(line);
        for (std::string item; std::getline(ss, item, ',');) f.push_back(item);
        if (f.size() != 9) {
            throw Error(ErrorCode::kParseError, kModule, "line " + std::to_string(line_no) + ": bad field count");
        }
        try {
            cells.push_back({f[0], f[1], std::stoi(f[2]), parse_number(f[3]), parse_number(f[4]),
                             parse_number(f[5]), parse_number(f[6]), std::stoul(f[7]),
                             std::stoul(f[8])});
        } catch (const std::logic_error&) {
            throw Error(ErrorCode::kParseError, kModule, "line " + std::to_string(line_no) + ": bad number");
        }
    }
    return cells;
}

void write_days_csv(const std::vector<DayRecord>& days, std::ostream& out) {
    out << "day,window,window_method,groupings,failures\n";
    for (const auto& d : days) {
        std::string failures = join(d.failures, '|');
        for (char& c : failures) {
            if (c == ',') c = ' ';
        }
        out << d.day << ',' << d.window << ',' << d.window_method << ',' << join(d.groupings, '|') << ','
            << failures << '\n';
    }
}

nlohmann::json to_json(const ErrorReport& report) {
    nlohmann::json cells = nlohmann::json::array();
    for (const auto& c : report.cells) {
        cells.push_back({{"method", c.method},
                         {"grouping", c.grouping},
                         {"horizon", c.horizon},
                         {"mean_abs", number_or_null(c.mean_abs)},
                         {"max_abs", number_or_null(c.max_abs)},
                         {"mean_rel", number_or_null(c.mean_rel)},
                         {"max_rel", number_or_null(c.max_rel)},
                         {"count", c.count},
                         {"failures", c.failures}});
    }
    return {{"span", report.span},
            {"h_max", report.h_max},
            {"decompositions", report.decompositions},
            {"cells", std::move(cells)},
            {"days", days_json(report.days)}};
}

ErrorReport report_from_json(const nlohmann::json& j) {
    try {
        ErrorReport r{j.at("span").get<double>(), j.at("h_max").get<int>(), {}, {},
                      j.at("decompositions").get<std::size_t>()};
        for (const auto& c : j.at("cells")) {
            r.cells.push_back({c.at("method").get<std::string>(), c.at("grouping").get<std::string>(),
                               c.at("horizon").get<int>(), number_from(c.at("mean_abs")),
                               number_from(c.at("max_abs")), number_from(c.at("mean_rel")),
                               number_from(c.at("max_rel")), c.at("count").get<std::size_t>(),
                               c.at("failures").get<std::size_t>()});
        }
        for (const auto& d : j.at("days")) {
            r.days.push_back({d.at("day").get<std::size_t>(), d.at("window").get<int>(),
                              d.at("window_method").get<std::string>(),
                              d.at("groupings").get<std::vector<std::string>>(),
                              d.at("failures").get<std::vector<std::string>>()});
        }
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::kParseError, kModule, std::string("malformed report: ") + e.what());
    }
}

void write_surface_csv(const SweepSurface& s, std::ostream& out) {
    out << "M,horizon,mean_abs,max_abs,mean_rel,max_rel\n";
    for (int m = 1; m <= s.max_prefix; ++m) {
        for (int h = 1; h <= s.h_max; ++h) {
            out << m << ',' << h << ',' << format_number(s.mean_abs(m - 1, h - 1)) << ','
                << format_number(s.max_abs(m - 1, h - 1)) << ','
                << format_number(s.mean_rel(m - 1, h - 1)) << ','
                << format_number(s.max_rel(m - 1, h - 1)) << '\n';
        }
    }
}

nlohmann::json to_json(const SweepSurface& s) {
    nlohmann::json rows = nlohmann::json::array();
    for (int m = 1; m <= s.max_prefix; ++m) {
        for (int h = 1; h <= s.h_max; ++h) {
            rows.push_back({{"M", m},
                            {"horizon", h},
                            {"mean_abs", number_or_null(s.mean_abs(m - 1, h - 1))},
                            {"max_abs", number_or_null(s.max_abs(m - 1, h - 1))},
                            {"mean_rel", number_or_null(s.mean_rel(m - 1, h - 1))},
                            {"max_rel", number_or_null(s.max_rel(m - 1, h - 1))}});
        }
    }
    return {{"max_prefix", s.max_prefix}, {"h_max", s.h_max}, {"surface", std::move(rows)},
            {"report", to_json(s.report)}};
}

void emit_report(const ErrorReport& report, ReportFormat format, const std::filesystem::path& path,
                 const nlohmann::json& metadata) {
    std::ofstream out = open_output(path);
    if (format == ReportFormat::kJson) {
        nlohmann::json doc = to_json(report);
        doc["metadata"] = metadata;
        doc["version"] = kVersion;
        out << doc.dump(2) << '\n';
    } else {
        write_metadata_lines(metadata, out);
        write_cells_csv(report.cells, out);
        const auto side = days_path(path);
        std::ofstream days = open_output(side);
        write_days_csv(report.days, days);
        finish(days, side);
    }
    finish(out, path);
}

void emit_report(const SweepSurface& surface, ReportFormat format,
                 const std::filesystem::path& path, const nlohmann::json& metadata) {
    std::ofstream out = open_output(path);
    if (format == ReportFormat::kJson) {
        nlohmann::json doc = to_json(surface);
        doc["metadata"] = metadata;
        doc["version"] = kVersion;
        out << doc.dump(2) << '\n';
    } else {
        write_metadata_lines(metadata, out);
        write_surface_csv(surface, out);
        const auto side = days_path(path);
        std::ofstream days = open_output(side);
        write_days_csv(surface.report.days, days);
        finish(days, side);
    }
    finish(out, path);
}

}  // namespace ssakit

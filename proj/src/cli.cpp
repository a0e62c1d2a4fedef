#include "ssakit/cli.hpp"

#include "ssakit/decomposition.hpp"
#include "ssakit/error.hpp"
#include "ssakit/forecast.hpp"
#include "ssakit/grouping.hpp"
#include "ssakit/window.hpp"

#include "CLI11.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

namespace ssakit {

namespace {

constexpr std::string_view kModule = "cli";

const std::vector<std::string> kCommands = {"decompose", "select-window", "forecast",
                                            "evaluate",  "sweep",         "strategy"};

[[noreturn]] void usage(const std::string& message) {
    throw Error(ErrorCode::kInvalidArgument, kModule, message);
}

int parse_int(std::string_view text, const std::string& what) {
    int value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size()) usage("bad " + what + " '" + std::string(text) + "'");
    return value;
}

bool starts_with(const std::string& s, std::string_view prefix) { return s.rfind(prefix, 0) == 0; }

std::string hint_for(ErrorCode code) {
    switch (code) {
        case ErrorCode::kInvalidArgument: return "check the flags (see --help)";
        case ErrorCode::kWindowOutOfRange: return "choose a window between 2 and N/2";
        case ErrorCode::kIndexOutOfRange: return "use component indices between 1 and the window length";
        case ErrorCode::kEmptyGrouping: return "give at least one component index";
        case ErrorCode::kNoSignChange:
        case ErrorCode::kNoCrossing: return "try --window log-lo or a fixed window";
        case ErrorCode::kTooShort: return "supply a longer series (evaluation needs two calendar years)";
        case ErrorCode::kDegenerateSeries: return "the series is constant; nothing to decompose";
        case ErrorCode::kVerticalSubspace: return "drop components from the grouping (e.g. prefix:M with M < L)";
        case ErrorCode::kParseError: return "fix the offending CSV row";
        case ErrorCode::kGapError: return "fill or interpolate the missing dates";
        case ErrorCode::kEmptyInput: return "the input has no data rows";
        case ErrorCode::kIoError: return "check the path and permissions";
        case ErrorCode::kAllFailed: return "inspect per-day failures in the days report";
        case ErrorCode::kInsufficientData: return "lower the polynomial degree or lengthen the series";
        default: return "see the message above";
    }
}

unsigned resolve_jobs(unsigned jobs) {
    if (jobs > 0) return jobs;
    if (const char* env = std::getenv("SSAKIT_JOBS")) {
        const std::string_view s(env);
        unsigned v = 0;
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec == std::errc() && ptr == s.data() + s.size() && v > 0) return v;
        usage("SSAKIT_JOBS must be a positive integer, got '" + std::string(s) + "'");
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

nlohmann::json metadata(const RunConfig& c, const TimeSeries& series) {
    nlohmann::json m;
    m["command"] = c.command;
    m["input"] = c.input.filename().string();
    m["window"] = c.window;
    m["groupings"] = c.groupings;
    m["horizon"] = c.horizon;
    m["seed"] = c.seed;
    m["day_stride"] = c.day_stride;
    m["series_length"] = series.size();
    m["start_date"] = series.start_date() ? format_date(*series.start_date()) : "";
    m["version"] = "ssakit " + std::string(kVersion);
    return m;
}

EvalPlan make_plan(const RunConfig& c) {
    EvalPlan plan;
    plan.h_max = c.horizon;
    plan.window = parse_window_spec(c.window);
    plan.seed = c.seed;
    plan.day_stride = c.day_stride;
    plan.jobs = resolve_jobs(c.jobs);
    for (const auto& g : c.groupings) {
        if (g == "sweep" || g == "strategy") continue;
        plan.groupings.push_back(parse_grouping_spec(g));
    }
    return plan;
}

void warn_fallback(const WindowChoice& choice, std::ostream& err) {
    if (choice.fallback) {
        err << "warning: window-select: no sign change in the autocorrelation; using log-lo window "
            << choice.window << '\n';
    }
}

TimeSeries load(const RunConfig& c) { return load_series(c.input, c.columns); }

void require_dates(const TimeSeries& series) {
    if (!series.start_date()) {
        throw Error(ErrorCode::kInvalidArgument, kModule,
                    "evaluation needs a date column (leap-year handling); pass --date-column");
    }
}

std::ofstream open_file(const std::filesystem::path& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorCode::kIoError, kModule, "cannot write " + path.string());
    return f;
}

template <class Fn>
void write_to(const RunConfig& c, std::ostream& out, Fn&& fn) {
    if (!c.output) {
        fn(out);
        return;
    }
    std::ofstream f = open_file(*c.output);
    fn(f);
    f.flush();
    if (!f) throw Error(ErrorCode::kIoError, kModule, "failed writing " + c.output->string());
}

std::string step_date(const TimeSeries& series, std::size_t position) {
    if (!series.start_date()) return "";
    return format_date(std::chrono::sys_days(*series.start_date()) +
                       std::chrono::days(static_cast<long>(position)));
}

void write_forecast(const RunConfig& c, const TimeSeries& series, const std::vector<double>& values,
                    const nlohmann::json& meta, std::ostream& out) {
    write_to(c, out, [&](std::ostream& o) {
        if (c.format == ReportFormat::kJson) {
            nlohmann::json doc;
            doc["metadata"] = meta;
            doc["forecast"] = nlohmann::json::array();
            for (std::size_t i = 0; i < values.size(); ++i) {
                doc["forecast"].push_back(
                    {{"step", i + 1}, {"date", step_date(series, series.size() + i)}, {"value", values[i]}});
            }
            o << doc.dump(2) << '\n';
        } else {
            for (const auto& [key, value] : meta.items()) o << "# " << key << ": " << value.dump() << '\n';
            o << "step,date,value\n";
            for (std::size_t i = 0; i < values.size(); ++i) {
                o << i + 1 << ',' << step_date(series, series.size() + i) << ','
                  << format_number(values[i]) << '\n';
            }
        }
    });
}

int cmd_select_window(const RunConfig& c, std::ostream& out, std::ostream& err) {
    const TimeSeries series = load(c);
    const WindowChoice choice = select_window(series, parse_window_spec(c.window));
    warn_fallback(choice, err);
    out << choice.window << '\n';
    return kExitOk;
}

int cmd_decompose(const RunConfig& c, std::ostream& out, std::ostream& err) {
    const TimeSeries series = load(c);
    const WindowChoice choice = select_window(series, parse_window_spec(c.window));
    warn_fallback(choice, err);
    const Decomposition d = decompose(series, choice.window, SvdBackend::kAuto);
    const auto& sigma = d.singular_values();
    const double total = sigma.squaredNorm();
    const int count = c.components > 0 ? std::min<int>(c.components, sigma.size()) : sigma.size();
    std::optional<Grouping> auto_group;
    if (!c.groupings.empty()) auto_group = auto_group_wcor(d, parse_grouping_spec(c.groupings.front()).clusters);
    nlohmann::json meta = metadata(c, series);
    meta["window_length"] = choice.window;
    if (auto_group) meta["auto_grouping"] = auto_group->label();
    write_to(c, out, [&](std::ostream& o) {
        if (c.format == ReportFormat::kJson) {
            nlohmann::json doc;
            doc["metadata"] = meta;
            doc["components"] = nlohmann::json::array();
            for (int k = 0; k < count; ++k) {
                doc["components"].push_back({{"component", k + 1},
                                             {"singular_value", sigma[k]},
                                             {"share", total > 0 ? sigma[k] * sigma[k] / total : 0.0}});
            }
            o << doc.dump(2) << '\n';
        } else {
            o << "# window_length: " << choice.window << '\n';
            if (auto_group) o << "# auto_grouping: " << auto_group->label() << '\n';
            o << "component,singular_value,share\n";
            for (int k = 0; k < count; ++k) {
                o << k + 1 << ',' << format_number(sigma[k]) << ','
                  << format_number(total > 0 ? sigma[k] * sigma[k] / total : 0.0) << '\n';
            }
        }
    });
    return kExitOk;
}

int run_strategy(const RunConfig& c, const TimeSeries& series, std::ostream& out) {
    EvalPlan plan = make_plan(c);
    if (plan.groupings.empty()) plan.groupings.push_back(GroupingSpec::auto_wcor());
    const StrategyResult r = practitioner_strategy(series, plan, c.test_suffix);
    nlohmann::json meta = metadata(c, series);
    meta["test_suffix"] = c.test_suffix;
    meta["window_length"] = r.audit.window;
    meta["chosen_grouping"] = r.chosen.label();
    meta["auto_grouping"] = r.audit.auto_group.label();
    meta["auto_best"] = r.audit.auto_best.label();
    meta["auto_error"] = r.audit.auto_error;
    meta["pair_best"] = r.audit.pair_best.label();
    meta["pair_error"] = r.audit.pair_error;
    meta["used_pair"] = r.audit.used_pair;
    write_forecast(c, series, r.forecast.values, meta, out);
    return kExitOk;
}

int cmd_forecast(const RunConfig& c, std::ostream& out, std::ostream& err) {
    const TimeSeries series = load(c);
    const std::string group_text = c.groupings.empty() ? "auto-wcor" : c.groupings.front();
    if (group_text == "strategy") return run_strategy(c, series, out);
    if (group_text == "sweep") usage("--grouping sweep is only valid for evaluate/sweep");
    const GroupingSpec spec = parse_grouping_spec(group_text);
    const WindowChoice choice = select_window(series, parse_window_spec(c.window));
    warn_fallback(choice, err);
    const Decomposition d = decompose(series, choice.window, SvdBackend::kAuto);
    Grouping group = Grouping::prefix(1);
    switch (spec.kind) {
        case GroupingSpec::Kind::kFixed: group = *spec.fixed; break;
        case GroupingSpec::Kind::kAutoWcor: group = auto_group_wcor(d, spec.clusters); break;
        case GroupingSpec::Kind::kAllButLast: group = Grouping::prefix(d.window() - 1); break;
    }
    d.check_grouping(group);
    const ForecastResult f = vector_forecast(d, group, c.horizon);
    nlohmann::json meta = metadata(c, series);
    meta["window_length"] = choice.window;
    meta["grouping_used"] = group.label();
    write_forecast(c, series, f.values, meta, out);
    return kExitOk;
}

int cmd_evaluate(const RunConfig& c, std::ostream& out, std::ostream& err, bool sweep) {
    const TimeSeries series = load(c);
    require_dates(series);
    for (const auto& g : c.groupings) {
        if (g == "sweep") sweep = true;
        if (g == "strategy") usage("--grouping strategy belongs to the forecast/strategy subcommands");
    }
    EvalPlan plan = make_plan(c);
    nlohmann::json meta = metadata(c, series);
    if (sweep) {
        plan.groupings.clear();
        const SweepSurface surface = sweep_prefix(series, plan);
        const OptimalPrefix best = optimal_prefix(surface);
        meta["min_window"] = surface.max_prefix;
        meta["m_mean"] = best.m_mean;
        meta["m_max"] = best.m_max;
        if (c.output) {
            emit_report(surface, c.format, *c.output, meta);
            err << "sweep: M_mean=" << best.m_mean << " M_max=" << best.m_max << '\n';
        } else if (c.format == ReportFormat::kJson) {
            nlohmann::json doc = to_json(surface);
            doc["metadata"] = meta;
            out << doc.dump(2) << '\n';
        } else {
            for (const auto& [key, value] : meta.items()) out << "# " << key << ": " << value.dump() << '\n';
            write_surface_csv(surface, out);
        }
        return kExitOk;
    }
    if (plan.groupings.empty()) plan.groupings.push_back(GroupingSpec::auto_wcor());
    const ErrorReport report = rolling_eval(series, plan);
    if (c.output) {
        emit_report(report, c.format, *c.output, meta);
    } else if (c.format == ReportFormat::kJson) {
        nlohmann::json doc = to_json(report);
        doc["metadata"] = meta;
        out << doc.dump(2) << '\n';
    } else {
        for (const auto& [key, value] : meta.items()) out << "# " << key << ": " << value.dump() << '\n';
        write_cells_csv(report.cells, out);
    }
    return kExitOk;
}

}  // namespace

int exit_code_for(ErrorCode code) {
    switch (code) {
        case ErrorCode::kInvalidArgument: return kExitUsage;
        case ErrorCode::kParseError:
        case ErrorCode::kGapError:
        case ErrorCode::kEmptyInput:
        case ErrorCode::kTooShort:
        case ErrorCode::kDegenerateSeries: return kExitInput;
        case ErrorCode::kIoError: return kExitIo;
        default: return kExitDomain;
    }
}

WindowSpec parse_window_spec(const std::string& text) {
    WindowSpec spec;
    if (text == "auto-ma" || text == "ma") {
        spec.method = WindowMethod::kMa;
        spec.fallback_to_log_lo = text == "auto-ma";
    } else if (text == "confband") {
        spec.method = WindowMethod::kConfBand;
    } else if (text == "log-lo") {
        spec.method = WindowMethod::kLogLo;
    } else if (text == "log-hi") {
        spec.method = WindowMethod::kLogHi;
    } else if (text == "big") {
        spec.method = WindowMethod::kBig;
    } else if (starts_with(text, "fixed:")) {
        spec.method = WindowMethod::kFixed;
        spec.fixed = parse_int(std::string_view(text).substr(6), "window");
        if (spec.fixed < 2) usage("fixed window must be at least 2");
    } else {
        usage("unknown window method '" + text + "'");
    }
    return spec;
}

GroupingSpec parse_grouping_spec(const std::string& text) {
    if (text == "auto-wcor") return GroupingSpec::auto_wcor();
    if (starts_with(text, "auto-wcor:")) {
        const int k = parse_int(std::string_view(text).substr(10), "cluster count");
        if (k < 1) usage("cluster count must be positive");
        return GroupingSpec::auto_wcor(k);
    }
    if (text == "all-but-last") return GroupingSpec::all_but_last();
    if (starts_with(text, "prefix:")) {
        const int m = parse_int(std::string_view(text).substr(7), "prefix size");
        if (m < 1) usage("prefix size must be positive");
        return GroupingSpec::set(Grouping::prefix(m));
    }
    if (starts_with(text, "set:")) {
        std::vector<int> idx;
        std::stringstream ss(text.substr(4));
        for (std::string item; std::getline(ss, item, ',');) idx.push_back(parse_int(item, "component index"));
        if (idx.empty()) usage("set: needs at least one component index");
        return GroupingSpec::set(Grouping(idx));
    }
    usage("unknown grouping policy '" + text + "'");
}

void validate(const RunConfig& c) {
    if (std::find(kCommands.begin(), kCommands.end(), c.command) == kCommands.end()) {
        usage("unknown command '" + c.command + "'");
    }
    if (c.input.empty()) usage("--input is required");
    if (c.horizon < 1) usage("--horizon must be at least 1");
    if (c.day_stride < 1) usage("--day-stride must be at least 1");
    if (c.command == "strategy" && c.test_suffix < 1) usage("--test-suffix must be at least 1");
    parse_window_spec(c.window);
    for (const auto& g : c.groupings) {
        if (g != "sweep" && g != "strategy") parse_grouping_spec(g);
    }
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
    try {
        validate(config);
        if (config.command == "select-window") return cmd_select_window(config, out, err);
        if (config.command == "decompose") return cmd_decompose(config, out, err);
        if (config.command == "forecast") return cmd_forecast(config, out, err);
        if (config.command == "evaluate") return cmd_evaluate(config, out, err, false);
        if (config.command == "sweep") return cmd_evaluate(config, out, err, true);
        return run_strategy(config, load(config), out);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\nhint: " << hint_for(e.code()) << '\n';
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        err << "error: unexpected failure: " << e.what() << '\n';
        return kExitUnexpected;
    }
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"ssakit: singular spectrum analysis decomposition, forecasting and backtesting"};
    app.require_subcommand(1);
    RunConfig config;
    std::string format = "csv";
    std::string output;

    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("-i,--input", config.input, "daily CSV file with a header row")->required();
        sub->add_option("--date-column", config.columns.date, "name of the date column (YYYY-MM-DD)")
            ->capture_default_str();
        sub->add_option("--value-column", config.columns.value, "name of the value column")
            ->capture_default_str();
        sub->add_option("-w,--window", config.window,
                        "auto-ma | ma | confband | log-lo | log-hi | big | fixed:<L>")
            ->capture_default_str();
        sub->add_option("-g,--grouping", config.groupings,
                        "auto-wcor[:k] | prefix:<M> | set:<i,j,...> | all-but-last | sweep | strategy "
                        "(repeatable)");
        sub->add_option("-H,--horizon", config.horizon, "maximal forecast horizon")->capture_default_str();
        sub->add_option("--seed", config.seed, "seed of the random baseline")->capture_default_str();
        sub->add_option("-j,--jobs", config.jobs, "worker threads (default: SSAKIT_JOBS or all cores)");
        sub->add_option("--day-stride", config.day_stride, "evaluate every n-th forecasting day")
            ->capture_default_str();
        sub->add_option("-o,--output", output, "report path (default: standard output)");
        sub->add_option("-f,--format", format, "csv | json")
            ->check(CLI::IsMember({"csv", "json"}))
            ->capture_default_str();
    };

    for (const auto& name : kCommands) {
        CLI::App* sub = app.add_subcommand(name);
        add_common(sub);
        if (name == "select-window") {
            sub->add_option("-m,--method", config.window, "alias of --window");
        }
        if (name == "strategy" || name == "forecast") {
            sub->add_option("--test-suffix", config.test_suffix, "held-out samples for the strategy search")
                ->capture_default_str();
        }
        if (name == "decompose") {
            sub->add_option("--components", config.components, "number of components listed (0 = all)");
        }
    }
    app.get_subcommand("decompose")->description("singular values and auto grouping of one decomposition");
    app.get_subcommand("select-window")->description("print the chosen window length");
    app.get_subcommand("forecast")->description("forecast the next --horizon values");
    app.get_subcommand("evaluate")->description("rolling-origin error report against baselines");
    app.get_subcommand("sweep")->description("error surface of prefix groupings [1]..[L_min]");
    app.get_subcommand("strategy")->description("held-out grouping search, then forecast");
    app.footer(
        "Exit codes: 0 ok, 1 unexpected failure, 2 usage error, 3 input data error, "
        "4 domain or numerical error, 5 I/O error. SSAKIT_JOBS sets the default --jobs.");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }
    for (const auto* sub : app.get_subcommands()) config.command = sub->get_name();
    config.format = format == "json" ? ReportFormat::kJson : ReportFormat::kCsv;
    if (!output.empty()) config.output = output;
    return run(config, out, err);
}

}  // namespace ssakit

#include "ssakit/evaluation.hpp"

#include "ssakit/error.hpp"
#include "ssakit/grouping.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <mutex>
#include <thread>

namespace ssakit {

namespace {

constexpr std::string_view kModule = "evaluation";
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

// Runs fn(i) for i in [0, n) on up to `jobs` threads. The first exception is
// rethrown after all workers have joined.
template <class Fn>
void parallel_for(std::size_t n, unsigned jobs, Fn&& fn) {
    const std::size_t workers = std::clamp<std::size_t>(jobs, 1, std::max<std::size_t>(n, 1));
    if (workers == 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error) error = std::current_exception();
                    next = n;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

double pairwise_sum(std::span<const double> v) {
    if (v.size() <= 8) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    const std::size_t mid = v.size() / 2;
    return pairwise_sum(v.first(mid)) + pairwise_sum(v.subspan(mid));
}

double series_span(const TimeSeries& series) {
    const double span = series.max() - series.min();
    if (!(span > 0.0)) {
        throw Error(ErrorCode::kSpanDegenerate, kModule, "series has zero span");
    }
    return span;
}

void check_protocol(const EvalPlan& plan) {
    if (plan.h_max < 1) throw Error(ErrorCode::kInvalidArgument, kModule, "h_max must be >= 1");
    if (plan.day_stride < 1) {
        throw Error(ErrorCode::kInvalidArgument, kModule, "day stride must be >= 1");
    }
}

void check_plan(const EvalPlan& plan) {
    check_protocol(plan);
    if (plan.groupings.empty() && !plan.baselines) {
        throw Error(ErrorCode::kInvalidArgument, kModule, "plan evaluates no method");
    }
}

std::vector<std::size_t> strided_days(const TimeSeries& series, const EvalPlan& plan) {
    const ForecastingDays d1 = forecasting_days(series, 1);
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < d1.days.size(); i += static_cast<std::size_t>(plan.day_stride)) {
        out.push_back(d1.days[i]);
    }
    return out;
}

Grouping resolve_grouping(const GroupingSpec& spec, const Decomposition& d) {
    switch (spec.kind) {
        case GroupingSpec::Kind::kFixed: d.check_grouping(*spec.fixed); return *spec.fixed;
        case GroupingSpec::Kind::kAutoWcor: return auto_group_wcor(d, spec.clusters);
        case GroupingSpec::Kind::kAllButLast: return Grouping::prefix(d.window() - 1);
    }
    throw Error(ErrorCode::kInvalidArgument, kModule, "unknown grouping kind");
}

using Forecast = std::optional<std::vector<double>>;

struct DayOutcome {
    std::vector<Forecast> ssa;
    Forecast random, constant, polyreg;
    std::vector<std::string> used;
    std::vector<std::string> failures;
    bool decomposed = false;
};

std::string describe(const std::string& what, const std::exception& e) { return what + ": " + e.what(); }

DayOutcome evaluate_day(const TimeSeries& series, const EvalPlan& plan, std::size_t day, int window) {
    DayOutcome out;
    const int horizon = static_cast<int>(std::min<std::size_t>(
        static_cast<std::size_t>(plan.h_max), series.size() - day));
    const auto observed = series.values().first(day);
    out.ssa.resize(plan.groupings.size());
    out.used.resize(plan.groupings.size());

    if (!plan.groupings.empty() && window > 0) {
        std::optional<Decomposition> d;
        try {
            d.emplace(decompose(series.prefix(day), window, plan.backend));
            out.decomposed = true;
        } catch (const Error& e) {
            out.failures.push_back(describe("decompose", e));
        }
        for (std::size_t g = 0; d && g < plan.groupings.size(); ++g) {
            try {
                const Grouping group = resolve_grouping(plan.groupings[g], *d);
                out.used[g] = group.label();
                out.ssa[g] = vector_forecast(fit_lre(*d, group), horizon).values;
            } catch (const Error& e) {
                out.failures.push_back(describe(plan.groupings[g].label(), e));
            }
        }
    }
    if (plan.baselines) {
        const std::uint64_t seed = splitmix64(plan.seed ^ splitmix64(day));
        out.random = random_forecast(observed, horizon, seed).values;
        out.constant = constant_forecast(observed, horizon).values;
        try {
            out.polyreg = polyreg_forecast(observed, horizon, plan.polyreg_degree).values;
        } catch (const Error& e) {
            out.failures.push_back(describe("polyreg", e));
        }
    }
    return out;
}

ErrorCell aggregate(const TimeSeries& series, const std::vector<std::size_t>& days,
                    const std::vector<DayOutcome>& outcomes,
                    const std::function<const Forecast&(const DayOutcome&)>& pick, int horizon,
                    double span, bool allow_empty) {
    std::vector<double> errors;
    std::size_t failures = 0;
    for (std::size_t i = 0; i < days.size(); ++i) {
        const std::size_t target = days[i] + static_cast<std::size_t>(horizon);
        if (target > series.size()) continue;
        const Forecast& f = pick(outcomes[i]);
        if (!f) {
            ++failures;
            continue;
        }
        errors.push_back(std::abs((*f)[static_cast<std::size_t>(horizon - 1)] - series[target - 1]));
    }
    ErrorCell cell{};
    if (errors.empty()) {
        if (!allow_empty) {
            throw Error(ErrorCode::kAllFailed, kModule,
                        "every forecasting day failed at horizon " + std::to_string(horizon));
        }
        cell = {{}, {}, horizon, kNaN, kNaN, kNaN, kNaN, 0, 0};
    } else {
        cell = summarize_errors(errors, span);
    }
    cell.horizon = horizon;
    cell.failures = failures;
    return cell;
}

}  // namespace

ForecastingDays forecasting_days(const TimeSeries& series, int horizon) {
    if (horizon < 1) throw Error(ErrorCode::kInvalidArgument, kModule, "horizon must be >= 1");
    const std::size_t n = series.size();
    ForecastingDays out{horizon, {}, {}, 0, false};
    if (series.start_date()) {
        using namespace std::chrono;
        const Date first = *series.start_date();
        const Date last = series.date_at(n - 1);
        if (first.year() >= last.year()) {
            throw Error(ErrorCode::kTooShort, kModule, "series must span at least two calendar years");
        }
        const auto jan1 = sys_days{last.year() / January / 1};
        out.year_start = static_cast<std::size_t>((jan1 - sys_days{first}).count()) + 1;
        out.leap_year = last.year().is_leap();
    } else {
        if (n < 730) {
            throw Error(ErrorCode::kTooShort, kModule, "undated series needs at least 730 samples");
        }
        out.year_start = n - 364;
    }
    for (std::size_t j = out.year_start; j + static_cast<std::size_t>(horizon) <= n; ++j) {
        out.days.push_back(j);
        out.targets.push_back(j + static_cast<std::size_t>(horizon));
    }
    if (out.days.empty()) {
        throw Error(ErrorCode::kTooShort, kModule,
                    "no forecasting day left for horizon " + std::to_string(horizon));
    }
    return out;
}

std::string GroupingSpec::label() const {
    switch (kind) {
        case Kind::kFixed: return fixed->label();
        case Kind::kAutoWcor: return "auto-wcor:" + std::to_string(clusters);
        case Kind::kAllButLast: return "all-but-last";
    }
    return "unknown";
}

const ErrorCell& ErrorReport::cell(const std::string& method, const std::string& grouping,
                                   int horizon) const {
    for (const auto& c : cells) {
        if (c.method == method && c.grouping == grouping && c.horizon == horizon) return c;
    }
    throw Error(ErrorCode::kInvalidArgument, kModule,
                "no cell for " + method + " / " + grouping + " / h=" + std::to_string(horizon));
}

double ErrorReport::horizon_average(const std::string& method, const std::string& grouping,
                                    bool use_max) const {
    double sum = 0.0;
    for (int h = 1; h <= h_max; ++h) {
        const ErrorCell& c = cell(method, grouping, h);
        sum += use_max ? c.max_rel : c.mean_rel;
    }
    return sum / h_max;
}

ErrorCell summarize_errors(std::span<const double> errors, double span) {
    if (!(span > 0.0)) throw Error(ErrorCode::kSpanDegenerate, kModule, "span must be positive");
    if (errors.empty()) throw Error(ErrorCode::kInvalidArgument, kModule, "empty error vector");
    std::vector<double> abs_errors(errors.size());
    std::transform(errors.begin(), errors.end(), abs_errors.begin(), [](double e) { return std::abs(e); });
    const double mean_abs = pairwise_sum(abs_errors) / static_cast<double>(abs_errors.size());
    const double max_abs = *std::max_element(abs_errors.begin(), abs_errors.end());
    return {{}, {}, 0, mean_abs, max_abs, mean_abs / span, max_abs / span, abs_errors.size(), 0};
}

std::vector<DayRecord> day_windows(const TimeSeries& series, const EvalPlan& plan) {
    check_protocol(plan);
    const std::vector<std::size_t> days = strided_days(series, plan);
    std::vector<DayRecord> out(days.size());
    parallel_for(days.size(), plan.jobs, [&](std::size_t i) {
        DayRecord& r = out[i];
        r.day = days[i];
        try {
            const WindowChoice w = select_window(series.prefix(days[i]), plan.window);
            r.window = w.window;
            r.window_method = to_string(w.method);
            if (w.fallback) r.failures.push_back("window: fell back to log-lo");
        } catch (const Error& e) {
            r.window = 0;
            r.window_method = to_string(plan.window.method);
            r.failures.push_back(describe("window", e));
        }
    });
    return out;
}

ErrorReport rolling_eval(const TimeSeries& series, const EvalPlan& plan) {
    return rolling_eval(series, plan, day_windows(series, plan));
}

ErrorReport rolling_eval(const TimeSeries& series, const EvalPlan& plan,
                         const std::vector<DayRecord>& windows) {
    check_plan(plan);
    const double span = series_span(series);

    const std::size_t n_days = windows.size();
    std::vector<std::size_t> days(n_days);
    for (std::size_t i = 0; i < n_days; ++i) days[i] = windows[i].day;

    std::vector<DayOutcome> outcomes(n_days);
    parallel_for(n_days, plan.jobs, [&](std::size_t i) {
        outcomes[i] = evaluate_day(series, plan, days[i], windows[i].window);
    });

    ErrorReport report{span, plan.h_max, {}, windows, 0};
    for (std::size_t i = 0; i < n_days; ++i) {
        DayRecord& r = report.days[i];
        r.groupings = outcomes[i].used;
        r.failures.insert(r.failures.end(), outcomes[i].failures.begin(), outcomes[i].failures.end());
        if (outcomes[i].decomposed) ++report.decompositions;
    }

    auto add_method = [&](const std::string& method, const std::string& grouping,
                          const std::function<const Forecast&(const DayOutcome&)>& pick) {
        for (int h = 1; h <= plan.h_max; ++h) {
            ErrorCell c = aggregate(series, days, outcomes, pick, h, span, plan.allow_empty_cells);
            c.method = method;
            c.grouping = grouping;
            report.cells.push_back(std::move(c));
        }
    };
    for (std::size_t g = 0; g < plan.groupings.size(); ++g) {
        add_method("ssa", plan.groupings[g].label(),
                   [g](const DayOutcome& o) -> const Forecast& { return o.ssa[g]; });
    }
    if (plan.baselines) {
        add_method("random", "-", [](const DayOutcome& o) -> const Forecast& { return o.random; });
        add_method("constant", "-", [](const DayOutcome& o) -> const Forecast& { return o.constant; });
        add_method("polyreg", "-", [](const DayOutcome& o) -> const Forecast& { return o.polyreg; });
    }
    return report;
}

int min_window(const std::vector<DayRecord>& windows) {
    int out = 0;
    for (const auto& r : windows) {
        if (r.window > 0 && (out == 0 || r.window < out)) out = r.window;
    }
    if (out == 0) {
        throw Error(ErrorCode::kAllFailed, kModule, "window selection failed on every day");
    }
    return out;
}

SweepSurface sweep_prefix(const TimeSeries& series, const EvalPlan& plan) {
    const std::vector<DayRecord> windows = day_windows(series, plan);
    const int l_min = min_window(windows);
    EvalPlan sweep = plan;
    sweep.groupings.clear();
    for (const Grouping& g : prefix_groupings(l_min)) sweep.groupings.push_back(GroupingSpec::set(g));
    sweep.allow_empty_cells = true;

    SweepSurface s{l_min, plan.h_max, {}, {}, {}, {}, rolling_eval(series, sweep, windows)};
    s.mean_abs.resize(l_min, plan.h_max);
    s.max_abs.resize(l_min, plan.h_max);
    s.mean_rel.resize(l_min, plan.h_max);
    s.max_rel.resize(l_min, plan.h_max);
    for (int m = 1; m <= l_min; ++m) {
        const std::string label = Grouping::prefix(m).label();
        for (int h = 1; h <= plan.h_max; ++h) {
            const ErrorCell& c = s.report.cell("ssa", label, h);
            s.mean_abs(m - 1, h - 1) = c.mean_abs;
            s.max_abs(m - 1, h - 1) = c.max_abs;
            s.mean_rel(m - 1, h - 1) = c.mean_rel;
            s.max_rel(m - 1, h - 1) = c.max_rel;
        }
    }
    return s;
}

OptimalPrefix optimal_prefix(const Eigen::MatrixXd& mean_rel, const Eigen::MatrixXd& max_rel) {
    auto argmin = [](const Eigen::MatrixXd& surface) {
        int best = 0;
        double best_value = kInf;
        for (Eigen::Index m = 0; m < surface.rows(); ++m) {
            const double avg = surface.row(m).mean();
            if (std::isnan(avg)) continue;
            if (avg < best_value) {
                best_value = avg;
                best = static_cast<int>(m) + 1;
            }
        }
        if (best == 0) {
            throw Error(ErrorCode::kAllFailed, kModule, "no prefix grouping has a complete error row");
        }
        return best;
    };
    if (mean_rel.size() == 0) throw Error(ErrorCode::kInvalidArgument, kModule, "empty surface");
    return {argmin(mean_rel), argmin(max_rel)};
}

OptimalPrefix optimal_prefix(const SweepSurface& surface) {
    return optimal_prefix(surface.mean_rel, surface.max_rel);
}

LocalMinReport local_min_check(const TimeSeries& series, const EvalPlan& plan, int m_star,
                               bool use_max) {
    return local_min_check(series, plan, m_star, day_windows(series, plan), use_max);
}

LocalMinReport local_min_check(const TimeSeries& series, const EvalPlan& plan, int m_star,
                               const std::vector<DayRecord>& windows, bool use_max) {
    const int l_min = min_window(windows);
    const std::vector<Grouping> neighbors = neighborhood(m_star, l_min);
    EvalPlan check = plan;
    check.baselines = false;
    check.allow_empty_cells = true;
    check.groupings = {GroupingSpec::set(Grouping::prefix(m_star))};
    for (const Grouping& g : neighbors) check.groupings.push_back(GroupingSpec::set(g));
    const ErrorReport report = rolling_eval(series, check, windows);

    auto error_of = [&](const Grouping& g) {
        const double e = report.horizon_average("ssa", g.label(), use_max);
        return std::isnan(e) ? kInf : e;
    };
    LocalMinReport out{true, error_of(Grouping::prefix(m_star)), {}, l_min};
    out.is_local_min = std::isfinite(out.center_error);
    for (const Grouping& g : neighbors) {
        const double e = error_of(g);
        out.neighbor_errors.push_back({g, e});
        if (!(e > out.center_error)) out.is_local_min = false;
    }
    return out;
}

LocalSearchResult local_search(const Grouping& start, int upper,
                               const std::function<double(const Grouping&)>& error,
                               int max_iterations) {
    LocalSearchResult out{start, error(start), {}, 0};
    while (out.iterations < max_iterations) {
        std::optional<Grouping> best;
        double best_error = out.error;
        for (const Grouping& g : neighborhood(out.best, upper)) {
            const double e = error(g);
            if (e < best_error) {
                best_error = e;
                best = g;
            }
        }
        if (!best) break;
        ++out.iterations;
        const bool removal = best->size() < out.best.size();
        const Grouping& bigger = removal ? out.best : *best;
        const Grouping& smaller = removal ? *best : out.best;
        for (int k : bigger.indices()) {
            if (!smaller.contains(k)) {
                out.moves.push_back(
                    {removal ? GroupingMove::Kind::kRemove : GroupingMove::Kind::kAdd, k});
                break;
            }
        }
        out.best = *best;
        out.error = best_error;
    }
    return out;
}

Grouping apply_moves(const Grouping& start, std::span<const GroupingMove> moves, int upper) {
    std::vector<int> current(start.indices().begin(), start.indices().end());
    for (const GroupingMove& m : moves) {
        const auto it = std::find(current.begin(), current.end(), m.component);
        if (m.kind == GroupingMove::Kind::kRemove) {
            if (it != current.end() && current.size() > 1) current.erase(it);
        } else if (it == current.end() && m.component <= upper) {
            current.push_back(m.component);
        }
    }
    return Grouping(std::move(current));
}

Grouping strategy_choice(double pair_error, double auto_error, const Grouping& pair_best,
                         const Grouping& auto_full, std::span<const GroupingMove> auto_moves,
                         int upper) {
    if (pair_error <= auto_error) return pair_best;
    return apply_moves(auto_full, auto_moves, upper);
}

StrategyResult practitioner_strategy(const TimeSeries& series, const EvalPlan& plan,
                                     std::size_t test_suffix_len) {
    check_plan(plan);
    const std::size_t n = series.size();
    if (test_suffix_len < static_cast<std::size_t>(plan.h_max) || test_suffix_len >= n) {
        throw Error(ErrorCode::kInvalidArgument, kModule,
                    "test suffix must satisfy h_max <= T < N");
    }
    const double span = series_span(series);

    int clusters = 2;
    for (const auto& g : plan.groupings) {
        if (g.kind == GroupingSpec::Kind::kAutoWcor) {
            clusters = g.clusters;
            break;
        }
    }

    // Origins j = N-T .. N-1, each with its own window and decomposition.
    const std::size_t first_origin = n - test_suffix_len;
    std::vector<std::optional<Decomposition>> decomps(test_suffix_len);
    parallel_for(test_suffix_len, plan.jobs, [&](std::size_t i) {
        const TimeSeries prefix = series.prefix(first_origin + i);
        try {
            const int w = select_window(prefix, plan.window).window;
            decomps[i].emplace(decompose(prefix, w, plan.backend));
        } catch (const Error&) {
            decomps[i].reset();
        }
    });
    if (!decomps.front()) {
        throw Error(ErrorCode::kAllFailed, kModule, "cannot decompose the training data");
    }

    const int full_window = select_window(series, plan.window).window;
    const Decomposition full = decompose(series, full_window, plan.backend);
    int upper = full_window;
    for (const auto& d : decomps) {
        if (d) upper = std::min(upper, d->window());
    }
    if (upper < 2) throw Error(ErrorCode::kTooShort, kModule, "window too small for a local search");

    std::map<Grouping, double> cache;
    auto test_error = [&](const Grouping& g) {
        if (auto it = cache.find(g); it != cache.end()) return it->second;
        std::vector<double> errors;
        double result = kInf;
        try {
            for (std::size_t i = 0; i < decomps.size(); ++i) {
                if (!decomps[i]) continue;
                const std::size_t origin = first_origin + i;
                const int horizon = static_cast<int>(
                    std::min<std::size_t>(static_cast<std::size_t>(plan.h_max), n - origin));
                const auto f = vector_forecast(fit_lre(*decomps[i], g), horizon).values;
                for (int h = 1; h <= horizon; ++h) {
                    errors.push_back(f[static_cast<std::size_t>(h - 1)] - series[origin + static_cast<std::size_t>(h) - 1]);
                }
            }
            if (!errors.empty()) result = summarize_errors(errors, span).mean_rel;
        } catch (const Error&) {
            result = kInf;
        }
        cache.emplace(g, result);
        return result;
    };

    const Grouping auto_group = auto_group_wcor(*decomps.front(), clusters);
    const LocalSearchResult auto_search = local_search(auto_group, upper, test_error);
    const LocalSearchResult pair_search = local_search(Grouping({1, 2}), upper, test_error);

    StrategyAudit audit{auto_group,        auto_search.best,  auto_search.error,
                        auto_search.moves, pair_search.best,  pair_search.error,
                        pair_search.moves, std::nullopt,      true,
                        full_window,       upper};
    Grouping chosen = pair_search.best;
    if (!(pair_search.error <= auto_search.error)) {
        audit.auto_group_full = auto_group_wcor(full, clusters);
        audit.used_pair = false;
        chosen = strategy_choice(pair_search.error, auto_search.error, pair_search.best,
                                 *audit.auto_group_full, auto_search.moves, upper);
    }
    ForecastResult forecast = vector_forecast(full, chosen, plan.h_max);
    return {chosen, std::move(forecast), std::move(audit)};
}

}  // namespace ssakit
